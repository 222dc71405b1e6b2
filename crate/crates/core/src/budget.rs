//! Size bounds for exhaustive searches.
//!
//! Every bound has a compiled default; `RESLAT_BUDGET` scales all of them
//! by an integer factor (e.g. `RESLAT_BUDGET=4`).

use std::sync::OnceLock;

fn factor() -> usize {
    static FACTOR: OnceLock<usize> = OnceLock::new();
    *FACTOR.get_or_init(|| {
        std::env::var("RESLAT_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&f| f > 0)
            .unwrap_or(1)
    })
}

fn scaled(base: usize) -> usize {
    base.saturating_mul(factor())
}

/// Largest candidate set a free-algebra closure may reach.
pub fn free_closure() -> usize {
    scaled(1 << 20)
}

/// Largest universe for which a full operation table is materialized.
pub fn table_elements() -> usize {
    scaled(4096)
}

/// Largest universe for exhaustive subset enumeration of filters.
pub fn filter_subset_scan() -> usize {
    12 + factor().ilog2() as usize
}

/// Largest total assignment count of a Kripke system.
pub fn kripke_points() -> usize {
    (16 * factor()).min(64)
}

/// Largest number of elements of a Kripke set algebra.
pub fn kripke_elements() -> usize {
    scaled(512)
}

/// Largest number of sections enumerated for a dual sheaf.
pub fn sections() -> usize {
    scaled(1 << 16)
}

/// Largest number of congruences enumerated.
pub fn congruences() -> usize {
    scaled(1 << 14)
}

/// Largest number of value vectors in a Lindenbaum algebra.
pub fn lindenbaum_classes() -> usize {
    scaled(1 << 12)
}

/// Largest number of homomorphisms listed by a single search.
pub fn homomorphisms() -> usize {
    scaled(1 << 16)
}
