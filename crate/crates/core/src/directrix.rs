//! Rotating directrices: the class of the scroll swept out by the
//! directrices of a family of balanced scrolls over `P¹_t`, and the Maroni
//! intersection number of the pentagonal partial pencils that it yields.
//!
//! Setup: `V` is a rank-`N` bundle on `P¹_s`, pulled back to `P¹_s x P¹_t`,
//! containing a sub-line-bundle `O(-a R_s - R_t)` with quotient `W`. On
//! each fiber `W_t = O(l)^r + O(l+1)^(N-1-r)`. The directrix sub-bundle `D`
//! is cut out inside `P(V)` and restricted to `s = 0`.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bundles::{pentagonal_k1, pentagonal_m};
use crate::chow::{
    grr_degree_on_p1xp1, ring_directrix_ambient, ring_p1xp1, ring_product_with_p1,
    ring_projective_space, ChowClass, ChowError, ChowPresentation,
};
use crate::symkernel::{int, Monomial, Poly, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DirectrixError {
    #[error("invalid directrix family N = {n}, r = {r}: {reason}")]
    InvalidFamily { n: i64, r: i64, reason: String },
    #[error(transparent)]
    Chow(#[from] ChowError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DirectrixFamily {
    /// Rank of `V`.
    pub n: i64,
    /// Number of minimal-degree summands of `W_t`.
    pub r: i64,
    /// Twist of the rotating sub-line-bundle.
    pub a: i64,
    /// Lower degree of `W_t`.
    pub l: i64,
}

impl DirectrixFamily {
    pub fn new(n: i64, r: i64, a: i64, l: i64) -> Result<DirectrixFamily, DirectrixError> {
        if r < 1 || r > n - 2 {
            return Err(DirectrixError::InvalidFamily {
                n,
                r,
                reason: "need 1 <= r <= N-2".into(),
            });
        }
        Ok(DirectrixFamily { n, r, a, l })
    }

    /// `deg V`, forced by `deg W_t = deg V + a`.
    pub fn deg_v(&self) -> i64 {
        self.r * self.l + (self.n - 1 - self.r) * (self.l + 1) - self.a
    }
}

/// Every stage of the directrix computation.
#[derive(Clone, Debug)]
pub struct DirectrixComputation {
    pub family: DirectrixFamily,
    /// `deg f_{t*} W(-(l+1) R_s)` from Grothendieck–Riemann–Roch; equals `-a-l`.
    pub grr_degree: Poly,
    /// `[P(D)]` in `P(V)`.
    pub ambient_class: ChowClass,
    /// `[P(D) ∩ {s = 0}]` in `P^(N-1) x P¹_t`.
    pub class: ChowClass,
    /// Coefficient of `H^(N-r-1) F`; the degree of the swept scroll.
    pub degree: Q,
}

/// Chern classes `(c₁, c₂)` of `W ⊗ O(-m R_s)` on `P¹ x P¹`, for `W` the
/// quotient of `V` by `O(-a R_s - R_t)`.
fn twisted_quotient_chern(
    ring: &Arc<ChowPresentation>,
    n: i64,
    deg_v: i64,
    a: i64,
    m: i64,
) -> Result<(ChowClass, Poly), ChowError> {
    let rs = ring.gen("R_s")?;
    let rt = ring.gen("R_t")?;
    // c(W) = (1 + deg_v R_s) / (1 - (a R_s + R_t)).
    let sub = rs.scale(&int(a)).add(&rt)?;
    let c1w = rs.scale(&int(deg_v)).add(&sub)?;
    let c2w = rs.scale(&int(deg_v)).multiply(&sub)?.add(&sub.pow(2))?;
    // Twist a rank-(N-1) bundle by L = -m R_s.
    let l = rs.scale(&int(-m));
    let c1 = c1w.add(&l.scale(&int(n - 1)))?;
    let c2 = c2w
        .add(&c1w.multiply(&l)?.scale(&int(n - 2)))?
        .add(&l.pow(2).scale(&int((n - 1) * (n - 2) / 2)))?;
    Ok((c1, c2.integrate()?))
}

/// The class of the scroll swept by the directrices, computed through the
/// degree of `f_{t*} W(-(l+1) R_s)` and the expansion of `[P(D)]`.
pub fn rotating_directrix_class(
    fam: DirectrixFamily,
) -> Result<DirectrixComputation, DirectrixError> {
    let DirectrixFamily { n, r, a, l } = fam;
    DirectrixFamily::new(n, r, a, l)?;
    let base = ring_p1xp1();
    let (c1, c2) = twisted_quotient_chern(&base, n, fam.deg_v(), a, l + 1)?;
    let grr_degree = grr_degree_on_p1xp1(&c1, &c2)?;
    // The pushforward has rank r and degree -(a+l); its dual carries the
    // extra R_t-term of the directrix class.
    let e = -grr_degree.clone();

    let ring = ring_directrix_ambient(n, int(fam.deg_v()))?;
    let zeta = ring.gen("zeta")?;
    let rs = ring.gen("R_s")?;
    let rt = ring.gen("R_t")?;
    let p = zeta.sub(&rs.scale(&int(l + 1)))?;
    let head = zeta.add(&rs.scale(&int(a)))?.add(&rt)?;
    let tail = p
        .pow((n - 1 - r) as u32)
        .add(&rt.scale(&e).multiply(&p.pow((n - 2 - r) as u32))?)?;
    let ambient_class = head.multiply(&tail)?;
    let restricted = ambient_class.multiply(&rs)?;

    let target = ring_product_with_p1(&ring_projective_space((n - 1) as u32));
    let mut terms = Vec::new();
    for (m, c) in restricted.terms() {
        debug_assert_eq!(m.exponent("R_s"), 1);
        let mono = Monomial::from_pairs([("H", m.exponent("zeta")), ("F", m.exponent("R_t"))]);
        terms.push((mono, c.clone()));
    }
    let class = ChowClass::from_terms(&target, terms);
    let hf = Monomial::from_pairs([("H", (n - r - 1) as u32), ("F", 1)]);
    let degree = class.coeff(&hf).as_constant().unwrap_or_else(Q::zero);
    Ok(DirectrixComputation {
        family: fam,
        grr_degree,
        ambient_class,
        class,
        degree,
    })
}

/// `H^(N-r) + (a+l+1) H^(N-r-1) F`, for comparison.
pub fn closed_form(fam: DirectrixFamily) -> ChowClass {
    let ring = ring_product_with_p1(&ring_projective_space((fam.n - 1) as u32));
    let k = (fam.n - fam.r) as u32;
    ChowClass::from_terms(
        &ring,
        [
            (Monomial::from_pairs([("H", k)]), Poly::one()),
            (
                Monomial::from_pairs([("H", k - 1), ("F", 1)]),
                int(fam.a + fam.l + 1),
            ),
        ],
    )
}

/// Number of `t` where a generically perfectly balanced `W_t = O(l+1)^(N-1)`
/// jumps to `O(l) + O(l+1)^(N-3) + O(l+2)`: minus the degree of
/// `f_{t*} W(-(l+2) R_s)`, whose fibers are `O(-1)^(N-1)` away from the jumps.
pub fn perfectly_balanced_jump_count(n: i64, a: i64, l: i64) -> Result<Q, DirectrixError> {
    if n < 2 {
        return Err(DirectrixError::InvalidFamily {
            n,
            r: n - 1,
            reason: "need N >= 2".into(),
        });
    }
    let base = ring_p1xp1();
    let deg_v = (n - 1) * (l + 1) - a;
    let (c1, c2) = twisted_quotient_chern(&base, n, deg_v, a, l + 2)?;
    let deg = grr_degree_on_p1xp1(&c1, &c2)?;
    Ok(-deg.as_constant().expect("numeric data"))
}

/// `M · p = k_R + m_R` for the pentagonal partial pencil, obtained from the
/// directrix computation with `a = k_R`, `l + 1 = m_R`, `N = 4`, `r = 1`.
pub fn maroni_intersection_pentagonal(g_r: i64) -> Result<Q, DirectrixError> {
    let k = pentagonal_k1(g_r);
    let m = pentagonal_m(g_r);
    let fam = DirectrixFamily::new(4, 1, k, m - 1)?;
    Ok(rotating_directrix_class(fam)?.degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c = rotating_directrix_class(DirectrixFamily::new(5, 2, 2, 1).unwrap()).unwrap();
        assert_eq!(c.class.to_string(), closed_form(c.family).to_string());
        assert_eq!(c.degree, Q::int(4));
        assert_eq!(c.grr_degree, int(-3));
        let h2 = c.class.ring().parse_class("H^2").unwrap();
        assert_eq!(c.class.multiply(&h2).unwrap().integrate().unwrap(), int(4));

        let c = rotating_directrix_class(DirectrixFamily::new(4, 1, 0, 0).unwrap()).unwrap();
        assert_eq!(c.class, c.class.ring().parse_class("H^3 + H^2*F").unwrap());
        let c = rotating_directrix_class(DirectrixFamily::new(5, 2, -3, 2).unwrap()).unwrap();
        assert_eq!(c.class, c.class.ring().parse_class("H^3").unwrap());
    }

    #[test]
    fn exhaustive_small() {
        for n in 3..=6 {
            for r in 1..=n - 2 {
                for a in -5..=5 {
                    for l in -5..=5 {
                        let f = DirectrixFamily::new(n, r, a, l).unwrap();
                        let c = rotating_directrix_class(f).unwrap();
                        assert_eq!(c.grr_degree, int(-a - l));
                        assert_eq!(c.class, closed_form(f), "N={n} r={r} a={a} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn balanced_jumps() {
        for n in 2..=6 {
            for a in -4..=4 {
                for l in -4..=4 {
                    assert_eq!(
                        perfectly_balanced_jump_count(n, a, l).unwrap(),
                        Q::int(a + l + 1)
                    );
                }
            }
        }
    }

    #[test]
    fn pentagonal_maroni() {
        assert_eq!(maroni_intersection_pentagonal(16).unwrap(), Q::int(2));
        assert_eq!(maroni_intersection_pentagonal(36).unwrap(), Q::int(4));
    }

    #[test]
    fn invalid_family() {
        assert!(DirectrixFamily::new(4, 3, 0, 0).is_err());
        assert!(DirectrixFamily::new(4, 0, 0, 0).is_err());
    }
}
