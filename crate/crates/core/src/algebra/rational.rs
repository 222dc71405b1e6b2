//! Exact rationals on [0, 1], t-norms and residua.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{Binary, Elem};
use crate::error::{Error, Result};

/// Always in lowest terms with a positive denominator.
pub type Rational = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TNorm {
    Lukasiewicz,
    Godel,
    Product,
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn zero() -> Rational {
    Rational::from_integer(0)
}

fn one() -> Rational {
    Rational::from_integer(1)
}

fn check_unit(x: Rational) -> Result<()> {
    if x < zero() || x > one() {
        return Err(Error::Domain(format!("{x} is outside [0,1]")));
    }
    Ok(())
}

pub fn tnorm_eval(kind: TNorm, x: Rational, y: Rational) -> Result<Rational> {
    check_unit(x)?;
    check_unit(y)?;
    Ok(match kind {
        TNorm::Lukasiewicz => (x + y - one()).max(zero()),
        TNorm::Godel => x.min(y),
        TNorm::Product => x * y,
    })
}

pub fn residuum_closed_form(kind: TNorm, x: Rational, y: Rational) -> Result<Rational> {
    check_unit(x)?;
    check_unit(y)?;
    if x <= y {
        return Ok(one());
    }
    Ok(match kind {
        TNorm::Lukasiewicz => (one() - x + y).min(one()),
        TNorm::Godel => y,
        TNorm::Product => y / x,
    })
}

/// `max{z in {0, 1/k, ..., 1} : x*z <= y}` by exhaustive scan.
pub fn grid_residuum(kind: TNorm, k: i64, x: Rational, y: Rational) -> Result<Rational> {
    if k < 1 {
        return Err(Error::Domain(format!("grid step 1/{k}")));
    }
    let mut best = None;
    for i in 0..=k {
        let z = r(i, k);
        if tnorm_eval(kind, x, z)? <= y {
            best = Some(z);
        }
    }
    best.ok_or_else(|| Error::Internal(format!("no z with {x}*z <= {y}")))
}

/// Largest `z` (in index order) with `star(x, z) <= y` (in index order).
///
/// Intended for chains whose order is the index order and whose `star`
/// table is monotone.
pub fn residuum_oracle(star: Binary<'_>, n: usize, x: Elem, y: Elem) -> Result<Elem> {
    (0..n)
        .rev()
        .find(|&z| star.apply(x, z) <= y)
        .ok_or_else(|| Error::Internal(format!("no z with star({x}, z) <= {y}")))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("not a rational: {s:?}"));
    let v = match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(s.parse().map_err(|_| bad())?),
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tnorm_values() {
        assert_eq!(
            tnorm_eval(TNorm::Lukasiewicz, r(7, 10), r(6, 10)).unwrap(),
            r(3, 10)
        );
        assert_eq!(tnorm_eval(TNorm::Godel, r(7, 10), r(6, 10)).unwrap(), r(6, 10));
        assert_eq!(tnorm_eval(TNorm::Product, r(1, 2), r(1, 3)).unwrap(), r(1, 6));
        for kind in [TNorm::Lukasiewicz, TNorm::Godel, TNorm::Product] {
            assert_eq!(tnorm_eval(kind, one(), r(2, 7)).unwrap(), r(2, 7));
            assert_eq!(tnorm_eval(kind, zero(), r(2, 7)).unwrap(), zero());
        }
    }

    #[test]
    fn out_of_range_is_domain_error() {
        assert!(matches!(
            tnorm_eval(TNorm::Godel, r(3, 2), one()),
            Err(Error::Domain(_))
        ));
        assert!(residuum_closed_form(TNorm::Godel, r(-1, 2), one()).is_err());
    }

    #[test]
    fn residuum_values() {
        assert_eq!(
            residuum_closed_form(TNorm::Lukasiewicz, r(7, 10), r(5, 10)).unwrap(),
            r(8, 10)
        );
        assert_eq!(
            residuum_closed_form(TNorm::Godel, r(7, 10), r(5, 10)).unwrap(),
            r(5, 10)
        );
        // Independent scan on the 1/100 grid.
        assert_eq!(
            grid_residuum(TNorm::Lukasiewicz, 100, r(7, 10), r(5, 10)).unwrap(),
            r(8, 10)
        );
        assert_eq!(
            grid_residuum(TNorm::Godel, 100, r(7, 10), r(5, 10)).unwrap(),
            r(5, 10)
        );
    }

    #[test]
    fn product_residuum_off_grid() {
        // y/x = 3/4 lies on the 1/4 grid but 1/3 does not lie on it.
        assert_eq!(
            residuum_closed_form(TNorm::Product, r(2, 3), r(1, 2)).unwrap(),
            r(3, 4)
        );
        assert_eq!(
            grid_residuum(TNorm::Product, 4, r(3, 4), r(1, 4)).unwrap(),
            r(1, 4)
        );
    }

    #[test]
    fn parse() {
        assert_eq!(parse_rational("3/6").unwrap(), r(1, 2));
        assert_eq!(parse_rational(" 1 ").unwrap(), one());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
