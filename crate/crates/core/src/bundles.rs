//! Splitting types of vector bundles on the line and the discrete
//! invariants of a degree-`d`, genus-`g` cover: the Tschirnhausen bundle `E`,
//! the bundle of quadrics `F`, and the syzygy bundles `N_i`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symkernel::{binomial, ceil_div, floor_div, Poly, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error("splitting type must have rank at least 1")]
    EmptySplittingType,
    #[error("no tame splitting type of rank {rank}, degree {degree} with floor {floor}")]
    NoTameType {
        rank: usize,
        degree: i64,
        floor: i64,
    },
    #[error("tame maximizer is not unique: {0} and {1}")]
    AmbiguousTame(String, String),
    #[error("m = {m} lies outside the range [{lo}, {hi}] for d = {d}, g = {g}")]
    OutOfRange {
        d: i64,
        g: i64,
        m: i64,
        lo: Q,
        hi: Q,
    },
    #[error("syzygy index {i} is outside 1..={max}")]
    IndexOutOfRange { i: i64, max: i64 },
    #[error("degree {0} is not supported here")]
    UnsupportedDegree(i64),
}

/// A bundle `O(a_1) + ... + O(a_r)` on the line, `a_1 <= ... <= a_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SplittingType {
    degrees: Vec<i64>,
}

impl TryFrom<Vec<i64>> for SplittingType {
    type Error = BundleError;
    fn try_from(v: Vec<i64>) -> Result<Self, BundleError> {
        SplittingType::new(v)
    }
}

impl From<SplittingType> for Vec<i64> {
    fn from(t: SplittingType) -> Vec<i64> {
        t.degrees
    }
}

impl SplittingType {
    pub fn new(mut degrees: Vec<i64>) -> Result<SplittingType, BundleError> {
        if degrees.is_empty() {
            return Err(BundleError::EmptySplittingType);
        }
        degrees.sort_unstable();
        Ok(SplittingType { degrees })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    /// The smallest twist `a_1`.
    pub fn floor(&self) -> i64 {
        self.degrees[0]
    }

    pub fn h0(&self) -> i64 {
        self.degrees.iter().map(|a| (a + 1).max(0)).sum()
    }

    pub fn h1(&self) -> i64 {
        self.degrees.iter().map(|a| (-a - 1).max(0)).sum()
    }

    /// `dim Ext^1(E, E) = sum over pairs of max(0, a_i - a_j - 1)`.
    pub fn ext1_dim(&self) -> i64 {
        let mut total = 0;
        for a in &self.degrees {
            for b in &self.degrees {
                total += (a - b - 1).max(0);
            }
        }
        total
    }

    pub fn is_balanced(&self) -> bool {
        self.ext1_dim() == 0
    }

    /// Consecutive gaps are at most the floor `a_1`.
    pub fn is_tame(&self) -> bool {
        let floor = self.floor();
        self.degrees.windows(2).all(|w| w[1] - w[0] <= floor)
    }

    /// `(r-1) a_1 + (r-2) a_2 + ... + a_{r-1}` for rank `r`.
    pub fn weighted_sum(&self) -> i64 {
        let r = self.rank() as i64;
        self.degrees
            .iter()
            .enumerate()
            .map(|(i, a)| (r - 1 - i as i64) * a)
            .sum()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|a| format!("O({a})")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// The unique splitting type with `max - min <= 1`.
pub fn balanced_type(rank: usize, degree: i64) -> SplittingType {
    assert!(rank >= 1, "rank must be positive");
    let r = rank as i64;
    let lo = floor_div(degree, r);
    let high_count = degree - lo * r;
    let degrees = (0..r)
        .map(|i| if i >= r - high_count { lo + 1 } else { lo })
        .collect();
    SplittingType::new(degrees).expect("non-empty")
}

/// All non-decreasing sequences of length `rank` summing to `degree` with
/// first entry exactly `floor` and consecutive gaps at most `floor`.
pub fn enumerate_tame(rank: usize, degree: i64, floor: i64) -> Vec<SplittingType> {
    fn go(
        prefix: &mut Vec<i64>,
        rank: usize,
        remaining: i64,
        floor: i64,
        out: &mut Vec<SplittingType>,
    ) {
        let left = rank - prefix.len();
        let last = *prefix.last().unwrap();
        if left == 0 {
            if remaining == 0 {
                out.push(SplittingType {
                    degrees: prefix.clone(),
                });
            }
            return;
        }
        let max_gap = floor.max(0);
        for next in last..=last + max_gap {
            // Every remaining entry is at least `next`.
            if next * left as i64 > remaining {
                break;
            }
            prefix.push(next);
            go(prefix, rank, remaining - next, floor, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if rank == 0 {
        return out;
    }
    let mut prefix = vec![floor];
    go(&mut prefix, rank, degree - floor, floor, &mut out);
    out
}

/// The most generic tame type `E[m]` of rank `d-1`, degree `g+d-1` and floor
/// `m`: the maximizer of the weighted sum. Uniqueness is checked, not assumed.
pub fn generic_tame(d: i64, g: i64, m: i64) -> Result<SplittingType, BundleError> {
    let rank = (d - 1) as usize;
    let degree = g + d - 1;
    let types = enumerate_tame(rank, degree, m);
    let best =
        types
            .iter()
            .map(SplittingType::weighted_sum)
            .max()
            .ok_or(BundleError::NoTameType {
                rank,
                degree,
                floor: m,
            })?;
    let winners: Vec<&SplittingType> = types.iter().filter(|t| t.weighted_sum() == best).collect();
    if winners.len() > 1 {
        return Err(BundleError::AmbiguousTame(
            winners[0].to_string(),
            winners[1].to_string(),
        ));
    }
    Ok(winners[0].clone())
}

/// Codimension of the Maroni locus of `E[m]`: `g - (d-1) m + 1`, or 0 when
/// `m` is the balanced floor (the locus is everything).
pub fn maroni_codimension(d: i64, g: i64, m: i64) -> Result<i64, BundleError> {
    let deg = g + d - 1;
    let lo = Q::new(deg, binomial(d, 2));
    let hi = Q::new(deg, d - 1);
    let mq = Q::int(m);
    if mq < lo || mq > hi {
        return Err(BundleError::OutOfRange { d, g, m, lo, hi });
    }
    if m == floor_div(deg, d - 1) {
        return Ok(0);
    }
    Ok(g - (d - 1) * m + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorialConditions {
    pub maroni: bool,
    pub ce: bool,
}

/// Divisibility conditions for the Maroni and Casnati–Ekedahl loci to be divisors.
pub fn divisorial_conditions(d: i64, g: i64) -> DivisorialConditions {
    let maroni = g % (d - 1) == 0;
    let rank_f = d * (d - 3) / 2;
    let ce = rank_f > 0 && ((d - 3) * (g + d - 1)) % rank_f == 0;
    DivisorialConditions { maroni, ce }
}

/// Rank of the `i`-th syzygy bundle. The closed formula vanishes at
/// `i = d-2`, where the last syzygy bundle is the line bundle `det E`, so
/// that slot is 1.
pub fn syzygy_rank(d: i64, i: i64) -> Result<i64, BundleError> {
    if i < 1 || i > d - 2 {
        return Err(BundleError::IndexOutOfRange { i, max: d - 2 });
    }
    if i == d - 2 {
        return Ok(1);
    }
    let num = i * (d - 2 - i) * binomial(d, i + 1);
    debug_assert_eq!(num % (d - 1), 0);
    Ok(num / (d - 1))
}

/// The discrete invariants of a degree-`d`, genus-`g` cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverInvariants {
    pub d: i64,
    pub g: i64,
    pub rank_e: i64,
    pub deg_e: i64,
    pub rank_f: i64,
    pub deg_f: i64,
    /// Number of branch points.
    pub b: i64,
}

impl CoverInvariants {
    pub fn new(d: i64, g: i64) -> CoverInvariants {
        let deg_e = g + d - 1;
        CoverInvariants {
            d,
            g,
            rank_e: d - 1,
            deg_e,
            rank_f: d * (d - 3) / 2,
            deg_f: (d - 3) * deg_e,
            b: 2 * g + 2 * d - 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowGenusTables {
    pub e_rational: SplittingType,
    pub f_rational: Option<SplittingType>,
    pub e_elliptic: SplittingType,
    pub f_elliptic: Option<SplittingType>,
}

/// `E` and `F` for a general cover of genus 0 and genus 1. `F` is absent for `d = 3`.
pub fn rational_and_elliptic_tables(d: i64) -> Result<LowGenusTables, BundleError> {
    if d < 3 {
        return Err(BundleError::UnsupportedDegree(d));
    }
    let ones = |n: i64| std::iter::repeat_n(1, n as usize);
    let twos = |n: i64| std::iter::repeat_n(2, n as usize);
    let e_rational = SplittingType::new(ones(d - 1).collect())?;
    let e_elliptic = SplittingType::new(ones(d - 2).chain(twos(1)).collect())?;
    let (f_rational, f_elliptic) = if d >= 4 {
        (
            Some(SplittingType::new(
                ones(d - 3).chain(twos(binomial(d - 2, 2))).collect(),
            )?),
            Some(SplittingType::new(twos(d * (d - 3) / 2).collect())?),
        )
    } else {
        (None, None)
    };
    Ok(LowGenusTables {
        e_rational,
        f_rational,
        e_elliptic,
        f_elliptic,
    })
}

/// `c1(alpha_* omega^N) = (2N - 1) c1(E)`.
pub fn pushforward_c1_power(n: i64, c1e: &Poly) -> Poly {
    c1e.scale(&Q::int(2 * n - 1))
}

/// `k_1 = ceil(5 (gR + 4) / 6)`, the largest twist in the pentagonal kernel.
pub fn pentagonal_k1(g_r: i64) -> i64 {
    ceil_div(5 * (g_r + 4), 6)
}

/// `m_R = ceil(-3 (gR + 4) / 4)`.
pub fn pentagonal_m(g_r: i64) -> i64 {
    ceil_div(-3 * (g_r + 4), 4)
}

/// `v = ceil((gR + 3) / 2)`, the larger summand of the tetragonal quadric bundle.
pub fn tetragonal_v(g_r: i64) -> i64 {
    ceil_div(g_r + 3, 2)
}

/// The balanced twists `k_1 >= ... >= k_6` of the pentagonal kernel, summing
/// to `5 (gR + 4)`.
pub fn pentagonal_kernel_twists(g_r: i64) -> Vec<i64> {
    let mut ks = balanced_type(6, 5 * (g_r + 4)).degrees().to_vec();
    ks.reverse();
    ks
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn st(v: &[i64]) -> SplittingType {
        SplittingType::new(v.to_vec()).unwrap()
    }

    #[test]
    fn balanced_examples() {
        assert!(st(&[3, 3, 3]).is_balanced());
        assert_eq!(st(&[3, 3, 3]).ext1_dim(), 0);
        assert!(!st(&[2, 3, 4]).is_balanced());
        assert_eq!(st(&[2, 3, 4]).ext1_dim(), 1);
        assert!(st(&[1, 1, 2, 2, 2]).is_balanced());
        assert_eq!(balanced_type(4, 12), st(&[3, 3, 3, 3]));
        assert_eq!(balanced_type(5, 12), st(&[2, 2, 2, 3, 3]));
        assert_eq!(balanced_type(1, 7), st(&[7]));
        assert_eq!(balanced_type(3, -4), st(&[-2, -1, -1]));
    }

    #[test]
    fn tame_examples() {
        assert!(!st(&[1, 2, 4]).is_tame());
        assert_eq!(generic_tame(4, 6, 2).unwrap(), st(&[2, 3, 4]));
        assert_eq!(generic_tame(4, 6, 3).unwrap(), st(&[3, 3, 3]));
        assert!(matches!(
            generic_tame(4, 6, 5),
            Err(BundleError::NoTameType { .. })
        ));
    }

    #[test]
    fn maroni_codimension_examples() {
        assert_eq!(maroni_codimension(4, 6, 2).unwrap(), 1);
        assert_eq!(maroni_codimension(3, 4, 2).unwrap(), 1);
        assert_eq!(maroni_codimension(4, 6, 3).unwrap(), 0);
        assert!(maroni_codimension(4, 6, 1).is_err());
    }

    #[test]
    fn divisorial_examples() {
        assert_eq!(
            divisorial_conditions(4, 9),
            DivisorialConditions {
                maroni: true,
                ce: true
            }
        );
        assert_eq!(
            divisorial_conditions(5, 16),
            DivisorialConditions {
                maroni: true,
                ce: true
            }
        );
        assert_eq!(
            divisorial_conditions(3, 5),
            DivisorialConditions {
                maroni: false,
                ce: false
            }
        );
    }

    #[test]
    fn syzygy_examples() {
        assert_eq!(syzygy_rank(5, 1).unwrap(), 5);
        assert_eq!(syzygy_rank(4, 2).unwrap(), 1);
        assert_eq!(syzygy_rank(6, 2).unwrap(), 16);
        assert!(syzygy_rank(4, 3).is_err());
    }

    #[test]
    fn low_genus_tables() {
        let t5 = rational_and_elliptic_tables(5).unwrap();
        assert_eq!(t5.f_rational.unwrap(), st(&[1, 1, 2, 2, 2]));
        let t4 = rational_and_elliptic_tables(4).unwrap();
        assert_eq!(t4.f_elliptic.unwrap(), st(&[2, 2]));
        assert!(rational_and_elliptic_tables(3)
            .unwrap()
            .f_rational
            .is_none());
        for d in 4..=9 {
            let t = rational_and_elliptic_tables(d).unwrap();
            assert_eq!(t.f_rational.unwrap().degree(), (d - 3) * (d - 1));
            assert_eq!(t.f_elliptic.unwrap().degree(), (d - 3) * d);
        }
    }

    #[test]
    fn pushforward_examples() {
        let c = Poly::var("c");
        assert_eq!(pushforward_c1_power(2, &c), c.scale(&Q::int(3)));
        assert_eq!(pushforward_c1_power(1, &c), c);
        assert_eq!(pushforward_c1_power(3, &c), c.scale(&Q::int(5)));
        // c1(Sym^2 E) = (rank + 1) c1(E) = 4 c1(E) at rank 3, so c1(F) = c1(E) at d = 4.
        let f = c.scale(&Q::int(4)) - pushforward_c1_power(2, &c);
        assert_eq!(f, c.scale(&Q::int(4 - 3)));
    }

    #[test]
    fn ceiling_helpers() {
        assert_eq!(pentagonal_k1(16), 17);
        assert_eq!(pentagonal_m(16), -15);
        assert_eq!(pentagonal_k1(36) + pentagonal_m(36), 4);
        assert_eq!(tetragonal_v(3), 3);
        let ks = pentagonal_kernel_twists(16);
        assert_eq!(ks[0], 17);
        assert_eq!(ks.iter().sum::<i64>(), 100);
    }

    #[test]
    fn serde_forms() {
        let t = st(&[2, 1, 3]);
        assert_eq!(t.to_string(), "O(1)+O(2)+O(3)");
        assert_eq!(serde_json::to_string(&t).unwrap(), "[1,2,3]");
        let back: SplittingType = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(back, st(&[1, 3]));
    }

    proptest! {
        #[test]
        fn riemann_roch(v in proptest::collection::vec(-30i64..30, 1..8)) {
            let t = SplittingType::new(v).unwrap();
            prop_assert_eq!(t.h0() - t.h1(), t.degree() + t.rank() as i64);
        }

        #[test]
        fn balanced_iff(v in proptest::collection::vec(-10i64..10, 1..7)) {
            let t = SplittingType::new(v).unwrap();
            let spread = t.degrees().last().unwrap() - t.floor();
            prop_assert_eq!(t.is_balanced(), spread <= 1);
            prop_assert_eq!(t.is_balanced(), t.ext1_dim() == 0);
        }

        #[test]
        fn balanced_type_is_balanced(r in 1usize..9, deg in -40i64..40) {
            let t = balanced_type(r, deg);
            prop_assert!(t.is_balanced());
            prop_assert_eq!(t.degree(), deg);
            prop_assert_eq!(t.rank(), r);
        }

        #[test]
        fn syzygy_duality(d in 4i64..=12, i in 1i64..=9) {
            prop_assume!(i <= d - 3);
            prop_assert_eq!(syzygy_rank(d, i).unwrap(), syzygy_rank(d, d - 2 - i).unwrap());
        }
    }
}
