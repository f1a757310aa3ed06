//! Combinatorial model of log pairs with normal-crossings support: the
//! closed-form mld, the semicontinuity slack, products, and the blow-up
//! divergence recursion.
//!
//! Points are abstracted to (incident component set, codimension); that is
//! all the closed formula depends on. Negative coefficients are allowed
//! here, unlike in the toric module, precisely so the -infinity mechanism
//! is exercised.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice::Rational;

/// A minimal log discrepancy: either a rational number or -infinity.
/// -infinity is a first-class value, never a sentinel rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MldValue {
    NegInfinity,
    Finite(Rational),
}

impl MldValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            MldValue::Finite(q) => Some(q),
            MldValue::NegInfinity => None,
        }
    }
}

impl fmt::Display for MldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MldValue::NegInfinity => write!(f, "-inf"),
            MldValue::Finite(q) => write!(f, "{q}"),
        }
    }
}

/// Components of a normal-crossings divisor, their log discrepancies
/// a_i (boundary coefficient 1 - a_i), and the nerve: the downward-closed
/// family of component subsets with nonempty intersection.
///
/// Component sets are bitmasks over the component indices.
#[derive(Clone, Debug)]
pub struct SncPair {
    ambient_dim: usize,
    coeffs: Vec<Rational>,
    nerve: BTreeSet<u64>,
}

/// A point specified by its incident component set and codimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SncPoint {
    pub incident: u64,
    pub codim: usize,
}

/// Result of the semicontinuity check: the slack a(η) - a(ξ) - codim(η,ξ),
/// or the flag that a -infinity value made the difference degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slack {
    Finite(Rational),
    NegInfinityCase,
}

impl SncPair {
    /// Builds a pair from the component log discrepancies and the declared
    /// nonempty intersections, which are closed downward automatically.
    ///
    /// Errors with [`Error::InvalidNerve`] if a declared set exceeds the
    /// ambient dimension or mentions an unknown component.
    pub fn new(ambient_dim: usize, coeffs: Vec<Rational>, declared: &[u64]) -> Result<SncPair> {
        if coeffs.len() > 63 {
            return Err(Error::InvalidNerve("more than 63 components".into()));
        }
        let all = if coeffs.is_empty() {
            0
        } else {
            (1u64 << coeffs.len()) - 1
        };
        let mut nerve = BTreeSet::new();
        nerve.insert(0u64);
        for &set in declared {
            if set & !all != 0 {
                return Err(Error::InvalidNerve(format!(
                    "set {set:#b} mentions unknown components"
                )));
            }
            if (set.count_ones() as usize) > ambient_dim {
                return Err(Error::InvalidNerve(format!(
                    "set {set:#b} has more components than the ambient dimension"
                )));
            }
            // Downward closure.
            let mut sub = set;
            loop {
                nerve.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & set;
            }
        }
        Ok(SncPair {
            ambient_dim,
            coeffs,
            nerve,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn components(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficient(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn nerve(&self) -> &BTreeSet<u64> {
        &self.nerve
    }

    fn check_point(&self, pt: SncPoint) -> Result<()> {
        if !self.nerve.contains(&pt.incident) {
            return Err(Error::InvalidPoint(format!(
                "incident set {:#b} is not in the nerve",
                pt.incident
            )));
        }
        let size = pt.incident.count_ones() as usize;
        if pt.codim < size || pt.codim > self.ambient_dim {
            return Err(Error::InvalidPoint(format!(
                "codimension {} outside [{size}, {}]",
                pt.codim, self.ambient_dim
            )));
        }
        Ok(())
    }

    /// Sum of the incident log discrepancies.
    fn a_sum(&self, set: u64) -> Rational {
        (0..self.coeffs.len())
            .filter(|i| set & (1 << i) != 0)
            .map(|i| self.coeffs[i].clone())
            .sum()
    }

    /// The minimal log discrepancy at a point with incident set J and the
    /// given codimension:
    ///
    /// * codimension 0 or 1: a_J + codim - |J| regardless of signs (the
    ///   point is the generic point of the ambient space or of a divisor);
    /// * codimension >= 2 with some incident a_i < 0: -infinity, by the
    ///   blow-up recursion;
    /// * otherwise the closed formula a_J + codim - |J|.
    pub fn mld(&self, pt: SncPoint) -> Result<MldValue> {
        self.check_point(pt)?;
        let size = pt.incident.count_ones() as usize;
        let negative = (0..self.coeffs.len())
            .any(|i| pt.incident & (1 << i) != 0 && self.coeffs[i].is_negative());
        if pt.codim >= 2 && negative {
            return Ok(MldValue::NegInfinity);
        }
        let value = self.a_sum(pt.incident)
            + Rational::from_integer((pt.codim as i64 - size as i64).into());
        Ok(MldValue::Finite(value))
    }

    /// The semicontinuity slack a(η) - (a(ξ) + codim(η,ξ)) for a
    /// specialization η of ξ. Nonpositive whenever all coefficients lie in
    /// [0, 1].
    ///
    /// Errors with [`Error::NotSpecialization`] unless I(ξ) ⊆ I(η) and
    /// codim ξ <= codim η.
    pub fn semicontinuity_slack(&self, eta: SncPoint, xi: SncPoint) -> Result<Slack> {
        self.check_point(eta)?;
        self.check_point(xi)?;
        if xi.incident & !eta.incident != 0 || xi.codim > eta.codim {
            return Err(Error::NotSpecialization);
        }
        let a_eta = self.mld(eta)?;
        let a_xi = self.mld(xi)?;
        match (a_eta, a_xi) {
            (MldValue::Finite(x), MldValue::Finite(y)) => {
                let codim = Rational::from_integer(((eta.codim - xi.codim) as i64).into());
                Ok(Slack::Finite(x - y - codim))
            }
            _ => Ok(Slack::NegInfinityCase),
        }
    }

    /// The product pair: dimensions add, components concatenate, and the
    /// nerve is the set of unions.
    pub fn product(&self, other: &SncPair) -> SncPair {
        let shift = self.coeffs.len();
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(other.coeffs.iter().cloned());
        let mut nerve = BTreeSet::new();
        for a in &self.nerve {
            for b in &other.nerve {
                nerve.insert(a | (b << shift));
            }
        }
        SncPair {
            ambient_dim: self.ambient_dim + other.ambient_dim,
            coeffs,
            nerve,
        }
    }

    /// The point of the product corresponding to a point of each factor.
    pub fn product_point(&self, mine: SncPoint, theirs: SncPoint) -> SncPoint {
        SncPoint {
            incident: mine.incident | (theirs.incident << self.coeffs.len()),
            codim: mine.codim + theirs.codim,
        }
    }
}

/// The log discrepancy of the (k+1)-st exceptional divisor in the blow-up
/// tower over a divisor E: a(E_{k+1}) = k·a(E) + a(E_1). Strictly
/// decreasing and unbounded below in k whenever a(E) < 0, which is how the
/// -infinity values arise.
pub fn blowup_divergence(a_e: &Rational, a_e1: &Rational, k: u64) -> Rational {
    Rational::from_integer(k.into()) * a_e + a_e1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    use crate::fan::Fan;
    use crate::lattice::{ratio, LatticeVector};
    use crate::logpair::ToricLogPair;

    #[test]
    fn closed_formula_matches_toric_computation() {
        // a = (1/2, 1/3) plus a third free direction: realize as the smooth
        // coordinate fan in rank 3 with b = (1/2, 2/3) on two rays.
        let pair = SncPair::new(3, vec![ratio(1, 2), ratio(1, 3)], &[0b11]).unwrap();
        let v = pair
            .mld(SncPoint {
                incident: 0b11,
                codim: 3,
            })
            .unwrap();
        assert_eq!(v, MldValue::Finite(ratio(11, 6)));

        let fan = Fan::from_i64(3, &[&[&[1, 0, 0], &[0, 1, 0]]]).unwrap();
        let b1 = fan.ray_index(&LatticeVector::from_i64(&[1, 0, 0])).unwrap();
        let mut boundary = vec![Rational::zero(); 2];
        boundary[b1] = ratio(1, 2);
        boundary[1 - b1] = ratio(2, 3);
        let toric = ToricLogPair::new(fan, boundary).unwrap();
        let top = crate::cone::Cone::from_i64(3, &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        let orbit = toric.mld_orbit(&top).unwrap().value;
        // codim 3 point on the 2-dimensional orbit closure: add 1.
        assert_eq!(MldValue::Finite(orbit + ratio(1, 1)), v);
    }

    #[test]
    fn generic_point_of_ambient_space() {
        let pair = SncPair::new(2, vec![ratio(1, 2)], &[0b1]).unwrap();
        let v = pair
            .mld(SncPoint {
                incident: 0,
                codim: 0,
            })
            .unwrap();
        assert_eq!(v, MldValue::Finite(Rational::zero()));
    }

    #[test]
    fn negative_coefficient_in_codim_two_diverges() {
        let pair = SncPair::new(2, vec![ratio(-1, 4)], &[0b1]).unwrap();
        let v = pair
            .mld(SncPoint {
                incident: 0b1,
                codim: 2,
            })
            .unwrap();
        assert_eq!(v, MldValue::NegInfinity);
        // The generic point of the divisor still reads the coefficient.
        let v = pair
            .mld(SncPoint {
                incident: 0b1,
                codim: 1,
            })
            .unwrap();
        assert_eq!(v, MldValue::Finite(ratio(-1, 4)));
    }

    #[test]
    fn invalid_points_are_rejected() {
        let pair = SncPair::new(2, vec![ratio(1, 2), ratio(1, 3)], &[0b01, 0b10]).unwrap();
        // 0b11 was not declared and is not implied.
        assert!(matches!(
            pair.mld(SncPoint {
                incident: 0b11,
                codim: 2
            }),
            Err(Error::InvalidPoint(_))
        ));
        assert!(matches!(
            pair.mld(SncPoint {
                incident: 0b01,
                codim: 0
            }),
            Err(Error::InvalidPoint(_))
        ));
    }

    #[test]
    fn nerve_is_closed_downward_and_bounded() {
        let pair = SncPair::new(3, vec![ratio(1, 1); 3], &[0b111]).unwrap();
        assert_eq!(pair.nerve().len(), 8);
        assert!(matches!(
            SncPair::new(2, vec![ratio(1, 1); 3], &[0b111]),
            Err(Error::InvalidNerve(_))
        ));
    }

    #[test]
    fn slack_examples() {
        // Boundary-free coefficients: slack a_2 - 1 = 0.
        let pair = SncPair::new(2, vec![ratio(1, 1), ratio(1, 1)], &[0b11]).unwrap();
        let s = pair
            .semicontinuity_slack(
                SncPoint {
                    incident: 0b11,
                    codim: 2,
                },
                SncPoint {
                    incident: 0b01,
                    codim: 1,
                },
            )
            .unwrap();
        assert_eq!(s, Slack::Finite(Rational::zero()));

        let pair = SncPair::new(3, vec![ratio(1, 2), ratio(1, 3)], &[0b11]).unwrap();
        let s = pair
            .semicontinuity_slack(
                SncPoint {
                    incident: 0b11,
                    codim: 3,
                },
                SncPoint {
                    incident: 0b01,
                    codim: 1,
                },
            )
            .unwrap();
        assert_eq!(s, Slack::Finite(ratio(-2, 3)));

        let pair = SncPair::new(2, vec![ratio(1, 2)], &[0b1]).unwrap();
        let s = pair
            .semicontinuity_slack(
                SncPoint {
                    incident: 0b1,
                    codim: 2,
                },
                SncPoint {
                    incident: 0,
                    codim: 0,
                },
            )
            .unwrap();
        assert_eq!(s, Slack::Finite(ratio(-1, 2)));

        assert_eq!(
            pair.semicontinuity_slack(
                SncPoint {
                    incident: 0,
                    codim: 0
                },
                SncPoint {
                    incident: 0b1,
                    codim: 1
                },
            )
            .unwrap_err(),
            Error::NotSpecialization
        );
    }

    #[test]
    fn slack_is_nonpositive_for_unit_interval_coefficients() {
        // Exhaustive over all nerve pairs for |I| = 6, n = 6, on a spread
        // of coefficient vectors in [0, 1].
        let coeff_sets: Vec<Vec<Rational>> = vec![
            (0..6).map(|i| ratio(i, 6)).collect(),
            (0..6).map(|i| ratio((i * 7 + 3) % 12, 12)).collect(),
            vec![ratio(1, 1); 6],
            vec![Rational::zero(); 6],
        ];
        for coeffs in coeff_sets {
            let pair = SncPair::new(6, coeffs, &[0b111111]).unwrap();
            for &eta_set in pair.nerve().clone().iter() {
                for &xi_set in pair.nerve().clone().iter() {
                    if xi_set & !eta_set != 0 {
                        continue;
                    }
                    let eta_min = eta_set.count_ones() as usize;
                    let xi_min = xi_set.count_ones() as usize;
                    for eta_codim in eta_min..=6 {
                        for xi_codim in xi_min..=eta_codim {
                            let s = pair
                                .semicontinuity_slack(
                                    SncPoint {
                                        incident: eta_set,
                                        codim: eta_codim,
                                    },
                                    SncPoint {
                                        incident: xi_set,
                                        codim: xi_codim,
                                    },
                                )
                                .unwrap();
                            match s {
                                Slack::Finite(v) => assert!(!v.is_positive()),
                                Slack::NegInfinityCase => panic!("no -inf expected"),
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn product_is_additive() {
        let p = SncPair::new(1, vec![ratio(1, 2)], &[0b1]).unwrap();
        let q = SncPair::new(1, vec![ratio(1, 3)], &[0b1]).unwrap();
        let prod = p.product(&q);
        let pt = p.product_point(
            SncPoint {
                incident: 0b1,
                codim: 1,
            },
            SncPoint {
                incident: 0b1,
                codim: 1,
            },
        );
        assert_eq!(pt.codim, 2);
        assert_eq!(prod.mld(pt).unwrap(), MldValue::Finite(ratio(5, 6)));

        // Identity: product with the empty pair.
        let empty = SncPair::new(0, vec![], &[]).unwrap();
        let same = p.product(&empty);
        assert_eq!(same.ambient_dim(), 1);
        assert_eq!(same.nerve(), p.nerve());

        // Additivity on all product points, exhaustively for small pairs.
        let p = SncPair::new(2, vec![ratio(1, 2), ratio(2, 3)], &[0b11]).unwrap();
        let q = SncPair::new(2, vec![ratio(1, 5)], &[0b1]).unwrap();
        let prod = p.product(&q);
        for &jp in p.nerve().iter() {
            for &jq in q.nerve().iter() {
                for cp in (jp.count_ones() as usize)..=2 {
                    for cq in (jq.count_ones() as usize)..=2 {
                        let pp = SncPoint {
                            incident: jp,
                            codim: cp,
                        };
                        let qq = SncPoint {
                            incident: jq,
                            codim: cq,
                        };
                        let lhs = prod.mld(p.product_point(pp, qq)).unwrap();
                        let (MldValue::Finite(x), MldValue::Finite(y)) =
                            (p.mld(pp).unwrap(), q.mld(qq).unwrap())
                        else {
                            panic!("finite values expected");
                        };
                        assert_eq!(lhs, MldValue::Finite(x + y));
                    }
                }
            }
        }
    }

    #[test]
    fn divergence_recursion() {
        assert_eq!(
            blowup_divergence(&ratio(-1, 2), &ratio(1, 1), 4),
            ratio(-1, 1)
        );
        assert_eq!(
            blowup_divergence(&ratio(0, 1), &ratio(7, 3), 11),
            ratio(7, 3)
        );
        assert_eq!(
            blowup_divergence(&ratio(-1, 4), &ratio(3, 2), 10),
            ratio(-1, 1)
        );
        // Strictly decreasing in k for a negative divisor coefficient.
        let mut prev = blowup_divergence(&ratio(-1, 3), &ratio(2, 1), 0);
        for k in 1..20 {
            let next = blowup_divergence(&ratio(-1, 3), &ratio(2, 1), k);
            assert!(next < prev);
            prev = next;
        }
    }

    #[test]
    fn full_boundary_free_point_reaches_ambient_dimension() {
        let pair = SncPair::new(4, vec![ratio(1, 1); 4], &[0b1111]).unwrap();
        let v = pair
            .mld(SncPoint {
                incident: 0b1111,
                codim: 4,
            })
            .unwrap();
        assert_eq!(v, MldValue::Finite(ratio(4, 1)));
    }
}
