//! Operation names used across modules.

pub const JOIN: &str = "join";
pub const MEET: &str = "meet";
pub const STAR: &str = "star";
pub const IMP: &str = "imp";
pub const ZERO: &str = "zero";
pub const ONE: &str = "one";
pub const OPLUS: &str = "oplus";
pub const ODOT: &str = "odot";
pub const NEG: &str = "neg";

pub fn cyl(i: usize) -> String {
    format!("c_{i}")
}

pub fn cocyl(i: usize) -> String {
    format!("q_{i}")
}

pub fn diag(i: usize, j: usize) -> String {
    format!("d_{i}_{j}")
}

/// `s_` followed by the images of `0..alpha` joined with dots.
pub fn subst(tau: &[usize]) -> String {
    let parts: Vec<String> = tau.iter().map(|t| t.to_string()).collect();
    format!("s_{}", parts.join("."))
}

/// The replacement `[i|j]`: sends `i` to `j`, fixes everything else.
pub fn replacement(alpha: usize, i: usize, j: usize) -> Vec<usize> {
    (0..alpha).map(|k| if k == i { j } else { k }).collect()
}

pub fn parse_subst(name: &str) -> Option<Vec<usize>> {
    let body = name.strip_prefix("s_")?;
    if body.is_empty() {
        return Some(Vec::new());
    }
    body.split('.').map(|p| p.parse().ok()).collect()
}

/// Index of a `c_<i>` name.
pub fn parse_cyl(name: &str) -> Option<usize> {
    name.strip_prefix("c_")?.parse().ok()
}

/// Dimension: number of consecutive `c_0, c_1, ...` tables.
pub fn dimension(alg: &super::FiniteAlgebra) -> usize {
    (0..).take_while(|&i| alg.has(&cyl(i))).count()
}
