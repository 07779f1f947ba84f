//! Divisor classes on the partial compactification of the Hurwitz space in
//! the basis `(λ, δ, D)`, plus named boundary symbols.
//!
//! The Maroni class `M` and the Casnati–Ekedahl class `CE` are the
//! Bogomolov expressions of `E` and `F`; [`maroni_class`] and [`ce_class`]
//! return the closed formulas, and [`bogomolov_in_basis`] re-derives them
//! from Chern data. [`class_x`] eliminates `D` from a positive combination.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bundles::divisorial_conditions;
use crate::symkernel::{int, var, Poly, RationalFunction, SymError, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("b = 10 (g + d = 6) makes the coefficients undefined at d = {d}, g = {g}")]
    DegenerateDenominator { d: i64, g: i64 },
    #[error("X is not a positive combination of divisors at d = {d}, g = {g}: {reason}")]
    NotDivisorial { d: i64, g: i64, reason: String },
    #[error("g = {g} is outside the admissible congruence class for d = {d}")]
    CongruenceViolation { d: i64, g: i64 },
    #[error("degree {0} is not supported")]
    UnsupportedDegree(i64),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// `lambda·λ + delta·δ + d·D + Σ boundary`, coefficients rational in `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorClass {
    pub lambda: RationalFunction,
    pub delta: RationalFunction,
    pub d: RationalFunction,
    pub boundary: BTreeMap<String, RationalFunction>,
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("lambda", &self.lambda.to_string())?;
        m.serialize_entry("delta", &self.delta.to_string())?;
        m.serialize_entry("D", &self.d.to_string())?;
        let b: BTreeMap<&String, String> = self
            .boundary
            .iter()
            .map(|(k, v)| (k, v.to_string()))
            .collect();
        m.serialize_entry("boundary", &b)?;
        m.end()
    }
}

impl DivisorClass {
    pub fn new(
        lambda: RationalFunction,
        delta: RationalFunction,
        d: RationalFunction,
    ) -> DivisorClass {
        DivisorClass {
            lambda,
            delta,
            d,
            boundary: BTreeMap::new(),
        }
    }

    pub fn scale(&self, c: &RationalFunction) -> DivisorClass {
        DivisorClass {
            lambda: c * &self.lambda,
            delta: c * &self.delta,
            d: c * &self.d,
            boundary: self
                .boundary
                .iter()
                .map(|(k, v)| (k.clone(), c * v))
                .collect(),
        }
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        let mut boundary = self.boundary.clone();
        for (k, v) in &other.boundary {
            let e = boundary
                .entry(k.clone())
                .or_insert_with(|| RationalFunction::constant(0));
            *e = &*e + v;
        }
        DivisorClass {
            lambda: &self.lambda + &other.lambda,
            delta: &self.delta + &other.delta,
            d: &self.d + &other.d,
            boundary,
        }
    }

    /// `λ-coefficient / (-δ-coefficient)`.
    pub fn slope(&self) -> Result<RationalFunction, SymError> {
        self.lambda.div(&(-&self.delta))
    }

    /// Substitute a value for `g`.
    pub fn at(&self, g: i64) -> Result<DivisorClass, SymError> {
        let gp = int(g);
        let sub = |r: &RationalFunction| r.substitute("g", &gp);
        Ok(DivisorClass {
            lambda: sub(&self.lambda)?,
            delta: sub(&self.delta)?,
            d: sub(&self.d)?,
            boundary: self
                .boundary
                .iter()
                .map(|(k, v)| Ok((k.clone(), sub(v)?)))
                .collect::<Result<_, SymError>>()?,
        })
    }
}

fn b_of(d: i64) -> Poly {
    &var("g") * &int(2) + int(2 * d - 2)
}

fn ratio(num: Poly, den: Poly) -> RationalFunction {
    RationalFunction::new(num, den).expect("nonzero denominator")
}

fn supported(d: i64) -> Result<(), ClassError> {
    if d < 3 {
        return Err(ClassError::UnsupportedDegree(d));
    }
    Ok(())
}

/// The Maroni class, with `b = 2g + 2d - 2`:
///
/// `M = ((10-d)/(d-1) b - 8)/(b-10) λ - (b/(d-1) - 2)/(b-10) δ + (b/(d-1) - 2)/(4(b-10)) D`.
pub fn maroni_class(d: i64) -> Result<DivisorClass, ClassError> {
    supported(d)?;
    let b = b_of(d);
    let bm10 = &b - &int(10);
    let lam = b.scale(&Q::new(10 - d, d - 1)) - int(8);
    let dl = b.scale(&Q::new(1, d - 1)) - int(2);
    Ok(DivisorClass::new(
        ratio(lam, bm10.clone()),
        ratio(-&dl, bm10.clone()),
        ratio(dl, bm10.scale(&Q::int(4))),
    ))
}

/// The Casnati–Ekedahl class (`d ≥ 4`):
///
/// `CE = ((21 - d - 54/d) b - 8d + 24)/(b-10) λ - ((2 - 6/d) b - 2d + 6)/(b-10) δ
///       + ((1 - 6/d) b - 2d + 16)/(4(b-10)) D`.
pub fn ce_class(d: i64) -> Result<DivisorClass, ClassError> {
    if d < 4 {
        return Err(ClassError::UnsupportedDegree(d));
    }
    let b = b_of(d);
    let bm10 = &b - &int(10);
    let lam = b.scale(&(Q::int(21 - d) - Q::new(54, d))) + int(24 - 8 * d);
    let dl = b.scale(&(Q::int(2) - Q::new(6, d))) + int(6 - 2 * d);
    let dd = b.scale(&(Q::int(1) - Q::new(6, d))) + int(16 - 2 * d);
    Ok(DivisorClass::new(
        ratio(lam, bm10.clone()),
        ratio(-&dl, bm10.clone()),
        ratio(dd, bm10.scale(&Q::int(4))),
    ))
}

/// Evaluate a class at `g`, rejecting `b = 10`.
pub fn class_at(class: &DivisorClass, d: i64, g: i64) -> Result<DivisorClass, ClassError> {
    if g + d == 6 {
        return Err(ClassError::DegenerateDenominator { d, g });
    }
    Ok(class.at(g)?)
}

/// `c₂ - (r-1)/(2r) c₁²`, invariant under twisting by a line bundle.
pub fn bogomolov(rank: i64, c1: &Poly, c2: &Poly) -> Poly {
    assert!(rank >= 1, "rank must be positive");
    c2 - &(c1 * c1).scale(&Q::new(rank - 1, 2 * rank))
}

/// A class given by coefficients on `(ch2E, ch2F, c1²E)`, rewritten in the
/// basis `(λ, δ, D)` by inverting the Chern-data formulas at degree `d`.
pub fn express_in_basis(d: i64, target: [RationalFunction; 3]) -> Result<DivisorClass, ClassError> {
    supported(d)?;
    let b = b_of(d);
    let rb = |p: Poly| ratio(p, b.clone());
    let c = |q: i64| RationalFunction::constant(q);
    // Columns λ, δ, D; rows ch2E, ch2F, c1².
    let col_l = [c(1), c(0), rb(int(-1))];
    let col_d = [c(12 - d), c(1), -rb(&b.scale(&Q::new(1, 2)) + &int(4))];
    let col_dd = [c(12 - 4 * d), c(4), c(0)];
    let det3 =
        |a: &[RationalFunction; 3], bb: &[RationalFunction; 3], cc: &[RationalFunction; 3]| {
            &(&a[0] * &(&(&bb[1] * &cc[2]) - &(&bb[2] * &cc[1])))
                - &(&(&bb[0] * &(&(&a[1] * &cc[2]) - &(&a[2] * &cc[1])))
                    - &(&cc[0] * &(&(&a[1] * &bb[2]) - &(&a[2] * &bb[1]))))
        };
    let det = det3(&col_l, &col_d, &col_dd);
    let lam = det3(&target, &col_d, &col_dd).div(&det)?;
    let del = det3(&col_l, &target, &col_dd).div(&det)?;
    let dd = det3(&col_l, &col_d, &target).div(&det)?;
    Ok(DivisorClass::new(lam, del, dd))
}

/// The Bogomolov expression of `E` (`which = 'E'`) or `F` (`which = 'F'`)
/// rewritten in the `(λ, δ, D)` basis. These reproduce `M` and `CE`.
pub fn bogomolov_in_basis(d: i64, which: char) -> Result<DivisorClass, ClassError> {
    let (rank, c1_scale) = match which {
        'E' => (d - 1, 1),
        'F' => (d * (d - 3) / 2, d - 3),
        _ => return Err(ClassError::UnsupportedDegree(d)),
    };
    if rank < 1 {
        return Err(ClassError::UnsupportedDegree(d));
    }
    // c2 = c1²/2 - ch2, with c1² = c1_scale² c1²E.
    let s2 = Q::int(c1_scale * c1_scale);
    let coeff_c1sq = s2.clone() * Q::new(1, 2) - s2 * Q::new(rank - 1, 2 * rank);
    let rf = |n: i64| RationalFunction::constant(n);
    let c1sq = RationalFunction::constant(coeff_c1sq);
    let target = match which {
        'E' => [rf(-1), rf(0), c1sq],
        _ => [rf(0), rf(-1), c1sq],
    };
    express_in_basis(d, target)
}

/// `X = aλ - bδ`: the positive combination of `M` and `CE` with vanishing
/// `D`-coefficient, and its normalization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassX {
    pub d: i64,
    pub x: DivisorClass,
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub weight_m: RationalFunction,
    pub weight_ce: RationalFunction,
}

/// Scale of `X`: the `δ`-coefficient is `-norm(g)`, chosen per degree so
/// that the per-graph inequality constants have integral leading terms.
fn normalization(d: i64) -> Poly {
    match d {
        3 => var("g"),
        4 => var("g").scale(&Q::int(2)),
        _ => var("g").scale(&Q::new(1, 2)),
    }
}

/// Symbolic class `X` for `d ∈ {3, 4, 5}`.
///
/// For `d = 3` there is no `CE` and no `D`, so `X` is a multiple of `M`.
/// Otherwise the weights are `(-CE_D, M_D)`, which kills the `D`-coefficient,
/// and the whole class is rescaled to the fixed normalization.
pub fn class_x(d: i64) -> Result<ClassX, ClassError> {
    if !(3..=5).contains(&d) {
        return Err(ClassError::UnsupportedDegree(d));
    }
    let m = maroni_class(d)?;
    let (wm0, wce0, raw) = if d == 3 {
        let one = RationalFunction::constant(1);
        (one, RationalFunction::constant(0), m.clone())
    } else {
        let ce = ce_class(d)?;
        let wm = -&ce.d;
        let wce = m.d.clone();
        let raw = m.scale(&wm).add(&ce.scale(&wce));
        (wm, wce, raw)
    };
    let target_b = RationalFunction::from_poly(normalization(d));
    let s = target_b.div(&(-&raw.delta))?;
    let mut x = raw.scale(&s);
    if d == 3 {
        // D does not exist in degree 3.
        x.d = RationalFunction::constant(0);
    }
    Ok(ClassX {
        d,
        a: x.lambda.clone(),
        b: -&x.delta,
        weight_m: &s * &wm0,
        weight_ce: &s * &wce0,
        x,
    })
}

/// `X` at a fixed genus, with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassXAt {
    pub d: i64,
    pub g: i64,
    pub a: Q,
    pub b: Q,
    pub weight_m: Q,
    pub weight_ce: Q,
}

/// `X` at `(d, g)`; requires both divisibility conditions (only Maroni for
/// `d = 3`) and positive weights.
pub fn class_x_at(d: i64, g: i64) -> Result<ClassXAt, ClassError> {
    let cx = class_x(d)?;
    if g + d == 6 {
        return Err(ClassError::DegenerateDenominator { d, g });
    }
    let cond = divisorial_conditions(d, g);
    if !cond.maroni || (d >= 4 && !cond.ce) {
        return Err(ClassError::NotDivisorial {
            d,
            g,
            reason: "divisibility conditions fail".into(),
        });
    }
    let at = crate::symkernel::assign([("g", g)]);
    let ev = |r: &RationalFunction| r.eval(&at);
    let (wm, wce) = (ev(&cx.weight_m)?, ev(&cx.weight_ce)?);
    let positive =
        !wm.is_negative() && !wm.is_zero() && (d == 3 || (!wce.is_negative() && !wce.is_zero()));
    if !positive {
        return Err(ClassError::NotDivisorial {
            d,
            g,
            reason: format!("weights ({wm}, {wce}) are not positive"),
        });
    }
    Ok(ClassXAt {
        d,
        g,
        a: ev(&cx.a)?,
        b: ev(&cx.b)?,
        weight_m: wm,
        weight_ce: wce,
    })
}

/// Whether `g` lies in the congruence class where `X` is divisorial:
/// `g` even for `d = 3`, `g ≡ 3 (mod 6)` for `d = 4`, `g ≡ 16 (mod 20)` for `d = 5`.
pub fn admissible(d: i64, g: i64) -> bool {
    let c = divisorial_conditions(d, g);
    (3..=5).contains(&d) && g >= 2 && c.maroni && (d == 3 || c.ce)
}

/// The slope bound `a/b` at an admissible `(d, g)`.
pub fn slope_bound(d: i64, g: i64) -> Result<Q, ClassError> {
    if !admissible(d, g) {
        return Err(ClassError::CongruenceViolation { d, g });
    }
    if g + d == 6 {
        return Err(ClassError::DegenerateDenominator { d, g });
    }
    let cx = class_x(d)?;
    let s = cx.x.slope()?;
    Ok(s.eval(&crate::symkernel::assign([("g", g)]))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symkernel::assign;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s).unwrap()
    }

    #[test]
    fn maroni_at_three_four() {
        let m = class_at(&maroni_class(3).unwrap(), 3, 4).unwrap();
        assert_eq!(m.lambda, rf("17"));
        assert_eq!(m.delta, rf("-2"));
        assert_eq!(m.d, rf("1/2"));
        assert_eq!(maroni_class(3).unwrap().slope().unwrap(), rf("(7*g + 6)/g"));
        assert!(matches!(
            class_at(&maroni_class(3).unwrap(), 3, 3),
            Err(ClassError::DegenerateDenominator { .. })
        ));
    }

    #[test]
    fn d_coefficient_signs_at_degree_four() {
        let m = maroni_class(4).unwrap();
        let ce = ce_class(4).unwrap();
        for g in (9..200).step_by(6) {
            let a = assign([("g", g)]);
            assert!(!m.d.eval(&a).unwrap().is_negative());
            assert!(ce.d.eval(&a).unwrap().is_negative());
        }
    }

    #[test]
    fn bogomolov_examples() {
        let (c1, c2, l) = (var("c1"), var("c2"), var("l"));
        assert_eq!(bogomolov(2, &Poly::zero(), &c2), c2);
        for r in 1..7 {
            let c1t = &c1 + &l.scale(&Q::int(r));
            let c2t = &(&c2 + &(&c1 * &l).scale(&Q::int(r - 1)))
                + &(&l * &l).scale(&Q::int(r * (r - 1) / 2));
            assert_eq!(bogomolov(r, &c1t, &c2t), bogomolov(r, &c1, &c2));
        }
    }

    #[test]
    fn maroni_and_ce_are_bogomolov_expressions() {
        for d in 3..=6 {
            assert_eq!(
                bogomolov_in_basis(d, 'E').unwrap(),
                maroni_class(d).unwrap()
            );
        }
        for d in 4..=6 {
            assert_eq!(bogomolov_in_basis(d, 'F').unwrap(), ce_class(d).unwrap());
        }
    }

    #[test]
    fn class_x_anchors() {
        let x3 = class_x(3).unwrap();
        assert_eq!(x3.x.slope().unwrap(), rf("(7*g + 6)/g"));
        assert!(x3.weight_ce.is_zero());
        let x4 = class_x(4).unwrap();
        assert_eq!(x4.x.slope().unwrap(), rf("(13*g + 15)/(2*g)"));
        assert!(x4.x.d.is_zero());
        let x5 = class_x(5).unwrap();
        assert_eq!(x5.a, rf("(31*g + 44)/10"));
        assert_eq!(x5.b, rf("g/2"));
        assert_eq!(x5.weight_m, rf("(2*g - 22)/5"));
        assert!(x5.x.d.is_zero());
    }

    #[test]
    fn slope_values() {
        assert_eq!(slope_bound(3, 4).unwrap(), Q::new(17, 2));
        assert_eq!(slope_bound(4, 9).unwrap(), Q::new(22, 3));
        assert_eq!(slope_bound(5, 16).unwrap(), Q::new(27, 4));
        assert!(matches!(
            slope_bound(4, 10),
            Err(ClassError::CongruenceViolation { .. })
        ));
    }

    #[test]
    fn class_x_at_rejects_negative_weights() {
        assert!(matches!(
            class_x_at(4, 3),
            Err(ClassError::NotDivisorial { .. })
        ));
        assert!(class_x_at(4, 9).is_ok());
        assert!(class_x_at(5, 16).is_ok());
    }
}
