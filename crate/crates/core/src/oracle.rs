//! Exact rational arithmetic for the maps that admit it.
//!
//! The r-adic maps and the tent map send a rational `p/q` to another
//! rational over the same denominator, so their orbits can be followed with
//! integer arithmetic only. These routines are the ground truth that the
//! floating-point and Monte Carlo paths are checked against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::systems::{SystemId, SystemSpec};

/// A rational point `numerator / denominator` of `[0, 1]`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalState {
    numerator: u128,
    denominator: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl RationalState {
    pub fn new(numerator: u128, denominator: u128) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::param("denominator", "must be positive"));
        }
        if numerator > denominator {
            return Err(Error::Domain {
                value: numerator as f64 / denominator as f64,
            });
        }
        Ok(Self::reduced(numerator, denominator))
    }

    fn reduced(numerator: u128, denominator: u128) -> Self {
        if numerator == 0 {
            return RationalState {
                numerator: 0,
                denominator: 1,
            };
        }
        let g = gcd(numerator, denominator);
        RationalState {
            numerator: numerator / g,
            denominator: denominator / g,
        }
    }

    pub fn zero() -> Self {
        RationalState {
            numerator: 0,
            denominator: 1,
        }
    }

    pub fn one() -> Self {
        RationalState {
            numerator: 1,
            denominator: 1,
        }
    }

    pub fn numerator(&self) -> u128 {
        self.numerator
    }

    pub fn denominator(&self) -> u128 {
        self.denominator
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl std::fmt::Display for RationalState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Multiplier applied to the numerator by one step of `system`.
fn expansion_factor(system: &SystemSpec) -> Result<u128> {
    match system.id() {
        SystemId::Radic(r) => Ok(u128::from(r)),
        SystemId::Tent => Ok(2),
        _ => Err(Error::Unsupported {
            system: system.to_string(),
            operation: "exact iteration",
        }),
    }
}

/// Fails when one step from a state with denominator `denominator` could
/// exceed the integer width. The bound does not depend on the horizon since
/// both maps keep the denominator fixed.
pub fn check_width(system: &SystemSpec, denominator: u128) -> Result<()> {
    let factor = expansion_factor(system)?;
    factor
        .checked_mul(denominator)
        .map(|_| ())
        .ok_or(Error::Overflow {
            what: "orbit step",
        })
}

/// One exact step. Callers are expected to have run [`check_width`].
pub(crate) fn step_unchecked(system: &SystemSpec, x: &RationalState) -> RationalState {
    let (num, den) = (x.numerator, x.denominator);
    match system.id() {
        SystemId::Radic(r) => {
            let r = u128::from(r);
            let next = (r * num) % den;
            // x is reduced, so gcd(next, den) = gcd(r, den).
            if gcd(r, den) != 1 {
                RationalState::reduced(next, den)
            } else if next == 0 {
                RationalState::zero()
            } else {
                RationalState {
                    numerator: next,
                    denominator: den,
                }
            }
        }
        SystemId::Tent => {
            let next = (2 * num).min(2 * den - 2 * num);
            if den % 2 == 0 {
                RationalState::reduced(next, den)
            } else if next == 0 {
                RationalState::zero()
            } else {
                RationalState {
                    numerator: next,
                    denominator: den,
                }
            }
        }
        _ => unreachable!("exact step on a system without rational dynamics"),
    }
}

/// One exact application of the map.
pub fn exact_step(system: &SystemSpec, x: &RationalState) -> Result<RationalState> {
    check_width(system, x.denominator)?;
    Ok(step_unchecked(system, x))
}

/// The exact orbit `(x, Tx, ..., T^n x)` for an r-adic or tent system.
pub fn exact_orbit(system: &SystemSpec, x: RationalState, n: usize) -> Result<Vec<RationalState>> {
    check_width(system, x.denominator)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut current = x;
    out.push(current);
    for _ in 0..n {
        current = step_unchecked(system, &current);
        out.push(current);
    }
    Ok(out)
}

/// Exact measure of the cylinder `{x : T^k x in P_{s_k}, k = 0..n-1}` for the
/// r-adic map with the canonical cells `P_i = [i/r, (i+1)/r)`.
///
/// Symbols are the base-r digits `0..r`. The cylinder is built by pulling the
/// interval back one symbol at a time, starting from the whole space.
pub fn exact_word_measure(system: &SystemSpec, word: &[u32]) -> Result<RationalState> {
    let r = match system.id() {
        SystemId::Radic(r) => r,
        _ => {
            return Err(Error::Unsupported {
                system: system.to_string(),
                operation: "exact word measure",
            })
        }
    };
    if let Some(&bad) = word.iter().find(|&&s| s >= r) {
        return Err(Error::SymbolOutOfRange {
            symbol: bad,
            alphabet: r,
        });
    }
    let radix = u128::from(r);
    // Interval [lo/scale, hi/scale).
    let (mut lo, mut hi, mut scale) = (0u128, 1u128, 1u128);
    for &symbol in word.iter().rev() {
        let offset = u128::from(symbol) * scale;
        scale = scale.checked_mul(radix).ok_or(Error::Overflow {
            what: "cylinder denominator",
        })?;
        lo += offset;
        hi += offset;
    }
    RationalState::new(hi - lo, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u128, d: u128) -> RationalState {
        RationalState::new(n, d).unwrap()
    }

    #[test]
    fn doubling_orbit_of_one_third_has_period_two() {
        let orbit = exact_orbit(&SystemSpec::radic(2).unwrap(), q(1, 3), 4).unwrap();
        assert_eq!(orbit, vec![q(1, 3), q(2, 3), q(1, 3), q(2, 3), q(1, 3)]);
    }

    #[test]
    fn tent_collapses_from_one_half() {
        let orbit = exact_orbit(&SystemSpec::tent(), q(1, 2), 2).unwrap();
        assert_eq!(orbit, vec![q(1, 2), q(1, 1), q(0, 1)]);
    }

    #[test]
    fn tent_fixes_zero() {
        let orbit = exact_orbit(&SystemSpec::tent(), RationalState::zero(), 7).unwrap();
        assert!(orbit.iter().all(|s| *s == RationalState::zero()));
    }

    #[test]
    fn reduction_with_shared_factor() {
        // 3/4 under x -> 2x mod 1 gives 1/2, then 0.
        let orbit = exact_orbit(&SystemSpec::radic(2).unwrap(), q(3, 4), 2).unwrap();
        assert_eq!(orbit, vec![q(3, 4), q(1, 2), q(0, 1)]);
        assert_eq!(q(6, 8), q(3, 4));
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(RationalState::new(1, 0).is_err());
        assert!(matches!(RationalState::new(5, 3), Err(Error::Domain { .. })));
    }

    #[test]
    fn overflow_is_reported_up_front() {
        let huge = RationalState::new(1, u128::MAX / 2 + 1).unwrap();
        assert_eq!(
            exact_orbit(&SystemSpec::radic(3).unwrap(), huge, 1),
            Err(Error::Overflow { what: "orbit step" })
        );
        assert!(exact_orbit(&SystemSpec::logistic(), q(1, 3), 1).is_err());
    }

    #[test]
    fn cylinder_measures() {
        let two = SystemSpec::radic(2).unwrap();
        assert_eq!(exact_word_measure(&two, &[0, 1]).unwrap(), q(1, 4));
        assert_eq!(exact_word_measure(&two, &[]).unwrap(), RationalState::one());
        let three = SystemSpec::radic(3).unwrap();
        assert_eq!(exact_word_measure(&three, &[2]).unwrap(), q(1, 3));
        assert_eq!(
            exact_word_measure(&two, &[0, 2]),
            Err(Error::SymbolOutOfRange {
                symbol: 2,
                alphabet: 2
            })
        );
        let long = vec![1u32; 200];
        assert!(matches!(
            exact_word_measure(&two, &long),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn word_measures_sum_to_one() {
        for r in 2..=3u32 {
            let sys = SystemSpec::radic(r).unwrap();
            let max_n = if r == 2 { 12 } else { 7 };
            for n in 0..=max_n {
                let count = (r as usize).pow(n as u32);
                let mut total_num = 0u128;
                let scale = u128::from(r).pow(n as u32);
                for code in 0..count {
                    let mut word = vec![0u32; n];
                    let mut c = code;
                    for slot in word.iter_mut().rev() {
                        *slot = (c % r as usize) as u32;
                        c /= r as usize;
                    }
                    let m = exact_word_measure(&sys, &word).unwrap();
                    total_num += m.numerator() * (scale / m.denominator());
                }
                assert_eq!(total_num, scale, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn float_tent_tracks_exact_orbit() {
        let tent = SystemSpec::tent();
        let exact = exact_orbit(&tent, q(1, 3), 30).unwrap();
        let mut x = 1.0f64 / 3.0;
        for (n, e) in exact.iter().enumerate() {
            let bound = 2f64.powi(n as i32) * 2f64.powi(-50);
            assert!((x - e.to_f64()).abs() <= bound, "n={n}");
            x = 1.0 - (1.0 - 2.0 * x).abs();
        }
    }
}
