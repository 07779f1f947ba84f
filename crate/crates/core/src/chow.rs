//! Graded quotient rings with rewrite-rule normal forms and a top-degree
//! integration map, plus the specific presentations used by the pencil and
//! directrix computations.
//!
//! Sign convention: on a projective bundle `P(E)` the tautological class
//! `zeta` satisfies `zeta^r = c1(E) zeta^(r-1) f + ...`, so that
//! `∫ zeta^r = deg E` and `∫ zeta^(r-1) f = 1`. The opposite (Segre) choice
//! would flip the sign of every odd power of `c1`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::symkernel::{binomial, int, Monomial, Poly, SymError, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("classes live in different rings (`{0}` vs `{1}`)")]
    RingMismatch(String, String),
    #[error("cannot integrate a class of degree {found}; top degree is {top}")]
    DegreeMismatch { found: u32, top: u32 },
    #[error("rank must be at least 2, got {0}")]
    InvalidRank(i64),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("rewrite system is not confluent at monomial {0}")]
    NotConfluent(String),
    #[error("integration table entry {0} is not a top-degree normal form")]
    BadIntegrationEntry(String),
    #[error("unknown ring `{0}`")]
    UnknownRing(String),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// `lhs -> sum(coeff * monomial)`. An empty right-hand side kills the monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct RewriteRule {
    pub lhs: Monomial,
    pub rhs: Vec<(Monomial, Poly)>,
}

impl RewriteRule {
    pub fn zero(lhs: Monomial) -> RewriteRule {
        RewriteRule {
            lhs,
            rhs: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChowPresentation {
    pub name: String,
    pub generators: Vec<(String, u32)>,
    /// Symbolic parameters and what they mean, e.g. `("c1E", "degree of E")`.
    pub parameters: Vec<(String, String)>,
    pub rules: Vec<RewriteRule>,
    pub top_degree: u32,
    pub integration: BTreeMap<Monomial, Poly>,
}

impl ChowPresentation {
    /// Build a presentation, checking confluence and the integration table.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<(String, u32)>,
        parameters: Vec<(String, String)>,
        rules: Vec<RewriteRule>,
        top_degree: u32,
        integration: BTreeMap<Monomial, Poly>,
    ) -> Result<Arc<ChowPresentation>, ChowError> {
        let ring = ChowPresentation {
            name: name.into(),
            generators,
            parameters,
            rules,
            top_degree,
            integration,
        };
        for m in ring.integration.keys() {
            let nf = ring.reduce_monomial(m);
            let is_nf = nf.len() == 1 && nf.get(m).is_some_and(|c| c == &Poly::one());
            if !is_nf || ring.degree(m) != ring.top_degree {
                return Err(ChowError::BadIntegrationEntry(m.to_string()));
            }
        }
        ring.check_confluence()?;
        Ok(Arc::new(ring))
    }

    pub fn generator_degree(&self, g: &str) -> Option<u32> {
        self.generators
            .iter()
            .find(|(n, _)| n == g)
            .map(|(_, d)| *d)
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.factors()
            .iter()
            .map(|(v, e)| self.generator_degree(v).unwrap_or(0) * e)
            .sum()
    }

    /// Normal form of a monomial. Monomials above the top degree are zero.
    pub fn reduce_monomial(&self, m: &Monomial) -> BTreeMap<Monomial, Poly> {
        if self.degree(m) > self.top_degree {
            return BTreeMap::new();
        }
        for rule in &self.rules {
            if let Some(q) = m.div(&rule.lhs) {
                return self.apply_rhs(rule, &q);
            }
        }
        BTreeMap::from([(m.clone(), Poly::one())])
    }

    fn apply_rhs(&self, rule: &RewriteRule, cofactor: &Monomial) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (mono, coeff) in &rule.rhs {
            for (nm, nc) in self.reduce_monomial(&mono.mul(cofactor)) {
                let entry = out.entry(nm).or_default();
                *entry += &(coeff * &nc);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// All generator monomials of degree at most the top degree.
    pub fn monomials_up_to_top(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        for (g, d) in &self.generators {
            let mut next = Vec::new();
            for m in &out {
                let mut e = 0u32;
                loop {
                    let cand = m.mul(&Monomial::from_pairs([(g.as_str(), e)]));
                    if self.degree(&cand) > self.top_degree {
                        break;
                    }
                    next.push(cand);
                    e += 1;
                    if *d == 0 {
                        break;
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Every monomial must reach the same normal form whichever applicable
    /// rule is fired first.
    pub fn check_confluence(&self) -> Result<(), ChowError> {
        for m in self.monomials_up_to_top() {
            let nf = self.reduce_monomial(&m);
            for rule in &self.rules {
                if let Some(q) = m.div(&rule.lhs) {
                    if self.apply_rhs(rule, &q) != nf {
                        return Err(ChowError::NotConfluent(m.to_string()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn gen(self: &Arc<Self>, name: &str) -> Result<ChowClass, ChowError> {
        if self.generator_degree(name).is_none() {
            return Err(ChowError::UnknownGenerator(name.to_string()));
        }
        Ok(ChowClass::from_terms(
            self,
            [(Monomial::var(name), Poly::one())],
        ))
    }

    pub fn one(self: &Arc<Self>) -> ChowClass {
        ChowClass::from_terms(self, [(Monomial::one(), Poly::one())])
    }

    pub fn zero(self: &Arc<Self>) -> ChowClass {
        ChowClass {
            ring: Arc::clone(self),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(self: &Arc<Self>, p: impl Into<Poly>) -> ChowClass {
        ChowClass::from_terms(self, [(Monomial::one(), p.into())])
    }

    /// Parse an expression in the generators and parameters. Any name that is
    /// a generator is read as a class; every other name is a parameter.
    pub fn parse_class(self: &Arc<Self>, expr: &str) -> Result<ChowClass, ChowError> {
        let p = Poly::parse(expr)?;
        let gens: Vec<&str> = self.generators.iter().map(|(g, _)| g.as_str()).collect();
        let mut by_mono: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in p.terms() {
            let gm = Monomial::from_pairs(
                m.factors()
                    .iter()
                    .filter(|(v, _)| gens.contains(&v.as_str()))
                    .map(|(v, e)| (v.clone(), *e)),
            );
            let pm = Monomial::from_pairs(
                m.factors()
                    .iter()
                    .filter(|(v, _)| !gens.contains(&v.as_str()))
                    .map(|(v, e)| (v.clone(), *e)),
            );
            by_mono.entry(gm).or_default().add_term(pm, c.clone());
        }
        Ok(ChowClass::from_terms(self, by_mono))
    }
}

/// An element of a [`ChowPresentation`], always stored in normal form.
#[derive(Clone)]
pub struct ChowClass {
    ring: Arc<ChowPresentation>,
    terms: BTreeMap<Monomial, Poly>,
}

impl ChowClass {
    pub fn from_terms<I>(ring: &Arc<ChowPresentation>, terms: I) -> ChowClass
    where
        I: IntoIterator<Item = (Monomial, Poly)>,
    {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            for (nm, nc) in ring.reduce_monomial(&m) {
                *out.entry(nm).or_default() += &(&c * &nc);
            }
        }
        out.retain(|_, c| !c.is_zero());
        ChowClass {
            ring: Arc::clone(ring),
            terms: out,
        }
    }

    pub fn ring(&self) -> &Arc<ChowPresentation> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Poly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn same_ring(&self, other: &ChowClass) -> Result<(), ChowError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(ChowError::RingMismatch(
                self.ring.name.clone(),
                other.ring.name.clone(),
            ))
        }
    }

    pub fn add(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.same_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_default() += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(ChowClass {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    pub fn sub(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Poly) -> ChowClass {
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), k * c))
            .filter(|(_, k)| !k.is_zero())
            .collect();
        ChowClass {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    pub fn multiply(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.same_ring(other)?;
        let mut raw: Vec<(Monomial, Poly)> = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                raw.push((m1.mul(m2), c1 * c2));
            }
        }
        Ok(ChowClass::from_terms(&self.ring, raw))
    }

    pub fn pow(&self, e: u32) -> ChowClass {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.multiply(self).expect("same ring");
        }
        acc
    }

    /// The homogeneous part of the given degree.
    pub fn part(&self, degree: u32) -> ChowClass {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.degree(m) == degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        ChowClass {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    /// Degree of a homogeneous class (`None` for zero or mixed classes).
    pub fn degree(&self) -> Option<u32> {
        let mut ds = self.terms.keys().map(|m| self.ring.degree(m));
        let first = ds.next()?;
        ds.all(|d| d == first).then_some(first)
    }

    /// Exact integral. Rejects any class with a non-zero part off the top degree.
    pub fn integrate(&self) -> Result<Poly, ChowError> {
        for m in self.terms.keys() {
            let d = self.ring.degree(m);
            if d != self.ring.top_degree {
                return Err(ChowError::DegreeMismatch {
                    found: d,
                    top: self.ring.top_degree,
                });
            }
        }
        Ok(self.integrate_top_part())
    }

    /// Integral of the top-degree component; lower-degree parts contribute 0.
    pub fn integrate_top_part(&self) -> Poly {
        let mut total = Poly::zero();
        for (m, c) in &self.terms {
            if self.ring.degree(m) == self.ring.top_degree {
                if let Some(v) = self.ring.integration.get(m) {
                    total += &(c * v);
                }
            }
        }
        total
    }

    /// Substitute values for the symbolic parameters in every coefficient.
    pub fn substitute_parameter(&self, name: &str, value: &Poly) -> ChowClass {
        let terms: Vec<(Monomial, Poly)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.substitute(name, value)))
            .collect();
        ChowClass::from_terms(&self.ring, terms)
    }
}

impl PartialEq for ChowClass {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other).is_ok() && self.terms == other.terms
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|a, b| {
            self.ring
                .degree(b.0)
                .cmp(&self.ring.degree(a.0))
                .then_with(|| a.0.cmp(b.0))
        });
        let parts: Vec<String> = entries
            .into_iter()
            .map(|(m, c)| {
                let cs = if c.num_terms() > 1 {
                    format!("({c})")
                } else {
                    c.to_string()
                };
                match (m.is_one(), cs.as_str()) {
                    (true, _) => cs,
                    (false, "1") => m.to_string(),
                    (false, "-1") => format!("-{m}"),
                    _ => format!("{cs}*{m}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChowClass[{}]({self})", self.ring.name)
    }
}

#[derive(Serialize)]
struct TermJson {
    monomial: String,
    coeff: String,
}

#[derive(Serialize)]
struct ClassJson<'a> {
    ring: &'a str,
    terms: Vec<TermJson>,
}

impl Serialize for ChowClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ClassJson {
            ring: &self.ring.name,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    monomial: m.to_string(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

// ---------------------------------------------------------------------------
// Chern-class helpers. A total Chern class is a vector c_0, c_1, ... of
// classes in one ring, with c_0 = 1.
// ---------------------------------------------------------------------------

pub type Chern = Vec<ChowClass>;

pub fn chern_line(c1: &ChowClass) -> Chern {
    vec![c1.ring().one(), c1.clone()]
}

fn chern_get(c: &Chern, i: usize, ring: &Arc<ChowPresentation>) -> ChowClass {
    c.get(i).cloned().unwrap_or_else(|| ring.zero())
}

/// `c(A (+) B) = c(A) c(B)`, truncated at the top degree.
pub fn whitney(a: &Chern, b: &Chern) -> Chern {
    let ring = Arc::clone(a[0].ring());
    let top = ring.top_degree as usize;
    (0..=top)
        .map(|k| {
            let mut acc = ring.zero();
            for i in 0..=k {
                let t = chern_get(a, i, &ring)
                    .multiply(&chern_get(b, k - i, &ring))
                    .expect("same ring");
                acc = acc.add(&t).expect("same ring");
            }
            acc
        })
        .collect()
}

/// Chern classes of `E (x) L` for `E` of the given rank and a line class `l`.
pub fn twist(c: &Chern, rank: i64, l: &ChowClass) -> Chern {
    let ring = Arc::clone(l.ring());
    (0..=rank as usize)
        .map(|k| {
            let mut acc = ring.zero();
            for i in 0..=k {
                let coef = binomial(rank - i as i64, (k - i) as i64);
                if coef == 0 {
                    continue;
                }
                let t = chern_get(c, i, &ring)
                    .multiply(&l.pow((k - i) as u32))
                    .expect("same ring");
                acc = acc.add(&t.scale(&int(coef))).expect("same ring");
            }
            acc
        })
        .collect()
}

pub fn dual(c: &Chern) -> Chern {
    c.iter()
        .enumerate()
        .map(|(i, x)| {
            if i % 2 == 1 {
                x.scale(&int(-1))
            } else {
                x.clone()
            }
        })
        .collect()
}

/// Multiplicative inverse of a total Chern class, up to the top degree.
pub fn inverse(c: &Chern) -> Chern {
    let ring = Arc::clone(c[0].ring());
    let top = ring.top_degree as usize;
    let mut inv: Chern = vec![ring.one()];
    for k in 1..=top {
        let mut acc = ring.zero();
        for i in 1..=k {
            let t = chern_get(c, i, &ring)
                .multiply(&inv[k - i])
                .expect("same ring");
            acc = acc.add(&t).expect("same ring");
        }
        inv.push(acc.scale(&int(-1)));
    }
    inv
}

/// `ch_2 = c1^2/2 - c2`.
pub fn ch2(c: &Chern) -> ChowClass {
    let ring = Arc::clone(c[0].ring());
    let c1 = chern_get(c, 1, &ring);
    let c2 = chern_get(c, 2, &ring);
    c1.pow(2)
        .scale(&Poly::constant(Q::new(1, 2)))
        .sub(&c2)
        .expect("same ring")
}

// ---------------------------------------------------------------------------
// Presentations
// ---------------------------------------------------------------------------

fn mono(pairs: &[(&str, u32)]) -> Monomial {
    Monomial::from_pairs(pairs.iter().map(|(v, e)| (*v, *e)))
}

fn gens(list: &[(&str, u32)]) -> Vec<(String, u32)> {
    list.iter().map(|(g, d)| (g.to_string(), *d)).collect()
}

/// `P^1 x P^1` with rulings `R_s`, `R_t`.
pub fn ring_p1xp1() -> Arc<ChowPresentation> {
    ChowPresentation::new(
        "P1xP1",
        gens(&[("R_s", 1), ("R_t", 1)]),
        vec![],
        vec![
            RewriteRule::zero(mono(&[("R_s", 2)])),
            RewriteRule::zero(mono(&[("R_t", 2)])),
        ],
        2,
        BTreeMap::from([(mono(&[("R_s", 1), ("R_t", 1)]), Poly::one())]),
    )
    .expect("valid presentation")
}

/// The Hirzebruch surface `F_h` with `tau^2 = h`, `f^2 = 0`, `tau f = 1`.
pub fn ring_hirzebruch(h: impl Into<Poly>) -> Arc<ChowPresentation> {
    let h = h.into();
    ChowPresentation::new(
        format!("F_{h}"),
        gens(&[("tau", 1), ("f", 1)]),
        vec![("h".into(), "self-intersection of tau".into())],
        vec![
            RewriteRule::zero(mono(&[("f", 2)])),
            RewriteRule {
                lhs: mono(&[("tau", 2)]),
                rhs: vec![(mono(&[("tau", 1), ("f", 1)]), h)],
            },
        ],
        2,
        BTreeMap::from([(mono(&[("tau", 1), ("f", 1)]), Poly::one())]),
    )
    .expect("valid presentation")
}

/// `P^n` with hyperplane class `H`.
pub fn ring_projective_space(n: u32) -> Arc<ChowPresentation> {
    ChowPresentation::new(
        format!("P{n}"),
        gens(&[("H", 1)]),
        vec![],
        vec![RewriteRule::zero(mono(&[("H", n + 1)]))],
        n,
        BTreeMap::from([(mono(&[("H", n)]), Poly::one())]),
    )
    .expect("valid presentation")
}

/// `base x P^1`, adding a square-zero generator `F` (the class of a point of P^1).
pub fn ring_product_with_p1(base: &ChowPresentation) -> Arc<ChowPresentation> {
    let mut generators = base.generators.clone();
    generators.push(("F".into(), 1));
    let mut rules = base.rules.clone();
    rules.push(RewriteRule::zero(mono(&[("F", 2)])));
    let integration = base
        .integration
        .iter()
        .map(|(m, v)| (m.mul(&Monomial::var("F")), v.clone()))
        .collect();
    ChowPresentation::new(
        format!("{}xP1", base.name),
        generators,
        base.parameters.clone(),
        rules,
        base.top_degree + 1,
        integration,
    )
    .expect("valid presentation")
}

/// The projective bundle `P(E)` over a base ring, for `E` of the given rank
/// with Chern classes `chern[1..]` living in the base. The new generator is
/// `zeta`, with `zeta^r = c1 zeta^(r-1) - c2 zeta^(r-2) + ...`.
pub fn ring_proj_bundle(
    base: &Arc<ChowPresentation>,
    rank: i64,
    chern: &[ChowClass],
    name: impl Into<String>,
) -> Result<Arc<ChowPresentation>, ChowError> {
    if rank < 2 {
        return Err(ChowError::InvalidRank(rank));
    }
    let r = rank as u32;
    let mut generators = vec![("zeta".to_string(), 1)];
    generators.extend(base.generators.iter().cloned());
    let mut rules = base.rules.clone();
    let mut rhs = Vec::new();
    for (i, ci) in chern.iter().enumerate().skip(1) {
        if i as u32 > r {
            break;
        }
        let sign = if i % 2 == 1 { 1 } else { -1 };
        for (m, c) in ci.terms() {
            rhs.push((
                m.mul(&mono(&[("zeta", r - i as u32)])),
                c.scale(&Q::int(sign)),
            ));
        }
    }
    rules.push(RewriteRule {
        lhs: mono(&[("zeta", r)]),
        rhs,
    });
    let integration = base
        .integration
        .iter()
        .map(|(m, v)| (m.mul(&mono(&[("zeta", r - 1)])), v.clone()))
        .collect();
    ChowPresentation::new(
        name,
        generators,
        base.parameters.clone(),
        rules,
        base.top_degree + r - 1,
        integration,
    )
}

/// The projective line with point class `f`.
pub fn ring_p1() -> Arc<ChowPresentation> {
    ChowPresentation::new(
        "P1",
        gens(&[("f", 1)]),
        vec![],
        vec![RewriteRule::zero(mono(&[("f", 2)]))],
        1,
        BTreeMap::from([(Monomial::var("f"), Poly::one())]),
    )
    .expect("valid presentation")
}

/// `P(E)` for `E` of the given rank and degree `c1` on the line:
/// `zeta^rank = c1 zeta^(rank-1) f`, `∫ zeta^(rank-1) f = 1`.
pub fn ring_proj_bundle_over_p1(
    rank: i64,
    c1: impl Into<Poly>,
) -> Result<Arc<ChowPresentation>, ChowError> {
    let c1 = c1.into();
    let base = ring_p1();
    let c1class = base.gen("f")?.scale(&c1);
    let mut ring =
        (*ring_proj_bundle(&base, rank, &[base.one(), c1class], format!("P(E_{rank})"))?).clone();
    ring.parameters
        .push(("c1".into(), format!("degree of E: {c1}")));
    Ok(Arc::new(ring))
}

/// Number of standard Young tableaux of a `k x (n-k)` rectangle, which is the
/// Plücker degree of the Grassmannian of `k`-planes in `n`-space.
pub fn grassmannian_degree(k: u32, n: u32) -> Q {
    let rows = k as i64;
    let cols = (n - k) as i64;
    let cells = rows * cols;
    let mut deg = Q::one();
    for i in 1..=cells {
        deg = deg * Q::int(i);
    }
    for r in 0..rows {
        for c in 0..cols {
            let hook = (cols - c - 1) + (rows - r - 1) + 1;
            deg = deg / Q::int(hook);
        }
    }
    deg
}

/// Solve for the constants in `∫ zeta^7 = a c1(F^v) + b` on the relative
/// Grassmannian of 2-dimensional quotients of a rank-5 bundle on the line.
///
/// Twisting `F^v` by `O(l)` moves `c1` by `5l` and the Plücker class by
/// `2l f` without changing the variety, so `a (c + 5l) + b` must equal the
/// expansion of `∫ (zeta + 2lf)^7`. The `l`-coefficient fixes `a`. For the
/// trivial bundle `zeta` is pulled back from the 6-dimensional fiber, so
/// `zeta^7 = 0` and `b = 0`.
pub fn grassmann_top_constants() -> (Q, Q) {
    let fiber_degree = Poly::constant(grassmannian_degree(2, 5));
    // Scratch ring where the unknown top integral is a free parameter `I`.
    let scratch = ChowPresentation::new(
        "G(2,F)-scratch",
        gens(&[("zeta", 1), ("f", 1)]),
        vec![
            ("I".into(), "unknown value of ∫zeta^7".into()),
            ("l".into(), "twist".into()),
        ],
        vec![RewriteRule::zero(mono(&[("f", 2)]))],
        7,
        BTreeMap::from([
            (mono(&[("zeta", 6), ("f", 1)]), fiber_degree),
            (mono(&[("zeta", 7)]), Poly::var("I")),
        ]),
    )
    .expect("valid presentation");
    let shifted = scratch
        .gen("zeta")
        .unwrap()
        .add(&scratch.gen("f").unwrap().scale(&(Poly::var("l") * 2)))
        .unwrap();
    // ∫(zeta + 2lf)^7 - I is linear in l; it must equal 5a l.
    let delta = shifted.pow(7).integrate().unwrap() - Poly::var("I");
    let l_coeffs = delta.coefficients_in("l");
    assert!(l_coeffs.len() <= 2, "twist difference must be linear in l");
    let slope = l_coeffs
        .get(1)
        .and_then(|p| p.as_constant())
        .unwrap_or_else(Q::zero);
    let a = slope / Q::int(5);
    (a, Q::zero())
}

/// The relative Grassmannian `G(2, F^v)` over the line, a 7-dimensional
/// space, with the two integration facts `∫ zeta^6 f = 5` and
/// `∫ zeta^7 = 14 c1(F^v)`.
pub fn ring_grassmann_bundle_g25(deg_f_dual: impl Into<Poly>) -> Arc<ChowPresentation> {
    let deg = deg_f_dual.into();
    let (a, b) = grassmann_top_constants();
    ChowPresentation::new(
        "G(2,F)",
        gens(&[("zeta", 1), ("f", 1)]),
        vec![("c1Fdual".into(), format!("degree of F^v: {deg}"))],
        vec![RewriteRule::zero(mono(&[("f", 2)]))],
        7,
        BTreeMap::from([
            (
                mono(&[("zeta", 6), ("f", 1)]),
                Poly::constant(grassmannian_degree(2, 5)),
            ),
            (mono(&[("zeta", 7)]), deg.scale(&a) + Poly::constant(b)),
        ]),
    )
    .expect("valid presentation")
}

/// `P(V)` over `P^1_s x P^1_t` for `V` pulled back from `P^1_s`:
/// `zeta^N = deg_v zeta^(N-1) R_s`, `∫ zeta^(N-1) R_s R_t = 1`.
pub fn ring_directrix_ambient(
    n: i64,
    deg_v: impl Into<Poly>,
) -> Result<Arc<ChowPresentation>, ChowError> {
    let base = ring_p1xp1();
    let c1 = base.gen("R_s")?.scale(&deg_v.into());
    ring_proj_bundle(&base, n, &[base.one(), c1], format!("P(V_{n})/P1xP1"))
}

/// Grothendieck–Riemann–Roch degree of the pushforward along the `s`-ruling:
/// `∫ c1 R_s + c1^2/2 - c2`. Higher direct images are assumed to vanish.
pub fn grr_degree_on_p1xp1(c1a: &ChowClass, c2a: &Poly) -> Result<Poly, ChowError> {
    if c1a.ring().name != "P1xP1" {
        return Err(ChowError::RingMismatch(
            c1a.ring().name.clone(),
            "P1xP1".into(),
        ));
    }
    let rs = c1a.ring().gen("R_s")?;
    let half = Poly::constant(Q::new(1, 2));
    let integrand = c1a.multiply(&rs)?.add(&c1a.pow(2).scale(&half))?;
    Ok(integrand.integrate_top_part() - c2a.clone())
}

/// A smooth surface inside some ring: `∫_S x = ∫ x [S]`.
#[derive(Clone, Debug)]
pub struct Surface {
    pub ring: Arc<ChowPresentation>,
    pub fundamental: ChowClass,
    pub canonical: ChowClass,
    pub c2: Poly,
}

impl Surface {
    pub fn integrate(&self, x: &ChowClass) -> Result<Poly, ChowError> {
        x.multiply(&self.fundamental)?.integrate()
    }
}

/// Look up a presentation by the names used on the command line:
/// `p1xp1`, `hirzebruch:<h>`, `pe:<rank>:<c1>`, `g25:<deg>`, `p<n>`, `p<n>xp1`.
pub fn ring_by_name(spec: &str) -> Result<Arc<ChowPresentation>, ChowError> {
    let unknown = || ChowError::UnknownRing(spec.to_string());
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["p1xp1"] => Ok(ring_p1xp1()),
        ["hirzebruch", h] => Ok(ring_hirzebruch(Poly::parse(h)?)),
        ["pe", r, c1] => {
            ring_proj_bundle_over_p1(r.parse().map_err(|_| unknown())?, Poly::parse(c1)?)
        }
        ["g25", deg] => Ok(ring_grassmann_bundle_g25(Poly::parse(deg)?)),
        [p] if p.starts_with('p') => {
            let rest = &p[1..];
            if let Some(n) = rest.strip_suffix("xp1") {
                let n: u32 = n.parse().map_err(|_| unknown())?;
                Ok(ring_product_with_p1(&ring_projective_space(n)))
            } else {
                let n: u32 = rest.parse().map_err(|_| unknown())?;
                Ok(ring_projective_space(n))
            }
        }
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symkernel::var;
    use proptest::prelude::*;

    #[test]
    fn p1xp1_pairings() {
        let r = ring_p1xp1();
        let sq = r
            .parse_class("(a*R_s + b*R_t)^2")
            .unwrap()
            .integrate()
            .unwrap();
        assert_eq!(sq, Poly::parse("2*a*b").unwrap());
        let x = r
            .parse_class("R_s + 3*R_t")
            .unwrap()
            .multiply(&r.parse_class("R_s").unwrap())
            .unwrap();
        assert_eq!(x.integrate().unwrap(), int(3));
        let c = r.parse_class("3*R_s + k*R_t").unwrap();
        assert_eq!(c.pow(2).integrate().unwrap(), Poly::parse("6*k").unwrap());
    }

    #[test]
    fn hirzebruch_genus() {
        let r = ring_hirzebruch(var("h"));
        let c = r.parse_class("2*tau + f").unwrap();
        assert_eq!(
            c.pow(2).integrate().unwrap(),
            Poly::parse("4*h + 4").unwrap()
        );
        assert_eq!(r.parse_class("tau*f").unwrap().integrate().unwrap(), int(1));
        let k = r.parse_class("-2*tau + (h-2)*f").unwrap();
        let two_g_minus_2 = c
            .pow(2)
            .add(&c.multiply(&k).unwrap())
            .unwrap()
            .integrate()
            .unwrap();
        assert_eq!(two_g_minus_2, Poly::parse("2*h - 2").unwrap());
    }

    #[test]
    fn proj_bundle_conventions() {
        let r = ring_proj_bundle_over_p1(3, Poly::parse("u+v").unwrap()).unwrap();
        assert_eq!(
            r.parse_class("zeta^3").unwrap().integrate().unwrap(),
            Poly::parse("u+v").unwrap()
        );
        assert_eq!(
            r.parse_class("zeta^2*f").unwrap().integrate().unwrap(),
            int(1)
        );
        let l2f = r.parse_class("(2*zeta - u*f)^2*(2*zeta - v*f)").unwrap();
        assert_eq!(l2f.integrate().unwrap(), Poly::parse("4*v").unwrap());
        let x = r.parse_class("(2*zeta - u*f)*(2*zeta - v*f)*zeta").unwrap();
        assert_eq!(x.integrate().unwrap(), Poly::parse("2*u + 2*v").unwrap());
        assert_eq!(
            ring_proj_bundle_over_p1(1, int(3)).unwrap_err(),
            ChowError::InvalidRank(1)
        );
    }

    #[test]
    fn multiply_and_degree_checks() {
        let r = ring_proj_bundle_over_p1(3, var("c"));
        let r = r.unwrap();
        let p = r.parse_class("(zeta + f)*(zeta - f)").unwrap();
        assert_eq!(p, r.parse_class("zeta^2").unwrap());
        assert!(matches!(
            r.parse_class("zeta").unwrap().integrate(),
            Err(ChowError::DegreeMismatch { .. })
        ));
        assert_eq!(
            r.parse_class("zeta").unwrap().integrate_top_part(),
            Poly::zero()
        );
        let other = ring_p1xp1();
        assert!(matches!(
            r.gen("zeta").unwrap().multiply(&other.gen("R_s").unwrap()),
            Err(ChowError::RingMismatch(..))
        ));
    }

    #[test]
    fn grassmannian_facts() {
        assert_eq!(grassmannian_degree(2, 5), Q::int(5));
        assert_eq!(grassmannian_degree(2, 4), Q::int(2));
        assert_eq!(grassmann_top_constants(), (Q::int(14), Q::zero()));
        let g = var("g");
        let r = ring_grassmann_bundle_g25(g.clone().scale(&Q::int(-2)) - 8);
        assert_eq!(
            r.parse_class("zeta^6*f").unwrap().integrate().unwrap(),
            int(1) * 5
        );
        assert_eq!(
            r.parse_class("zeta^7").unwrap().integrate().unwrap(),
            Poly::parse("-28*g - 112").unwrap()
        );
    }

    #[test]
    fn product_with_p1() {
        let r = ring_product_with_p1(&ring_projective_space(4));
        assert_eq!(r.parse_class("H^4*F").unwrap().integrate().unwrap(), int(1));
        assert_eq!(r.parse_class("H^5").unwrap().integrate().unwrap(), int(0));
    }

    #[test]
    fn grr_examples() {
        let r = ring_p1xp1();
        assert_eq!(
            grr_degree_on_p1xp1(&r.zero(), &Poly::zero()).unwrap(),
            Poly::zero()
        );
        // A line bundle of degree m on the base of the pushforward.
        let lt = r.parse_class("m*R_t").unwrap();
        assert_eq!(grr_degree_on_p1xp1(&lt, &Poly::zero()).unwrap(), var("m"));
        // Degree m along the fibers only: pushforward is trivial.
        let ls = r.parse_class("m*R_s").unwrap();
        assert_eq!(
            grr_degree_on_p1xp1(&ls, &Poly::zero()).unwrap(),
            Poly::zero()
        );
    }

    #[test]
    fn serializes_to_json() {
        let r = ring_p1xp1();
        let c = r.parse_class("2*R_s - R_t").unwrap();
        let js = serde_json::to_value(&c).unwrap();
        assert_eq!(js["ring"], "P1xP1");
        assert_eq!(js["terms"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn all_presentations_are_confluent() {
        for r in [
            ring_p1xp1(),
            ring_hirzebruch(var("h")),
            ring_proj_bundle_over_p1(4, var("c")).unwrap(),
            ring_grassmann_bundle_g25(var("c")),
            ring_product_with_p1(&ring_projective_space(5)),
            ring_directrix_ambient(5, var("e")).unwrap(),
        ] {
            assert!(r.check_confluence().is_ok(), "{}", r.name);
        }
    }

    proptest! {
        #[test]
        fn proj_bundle_normalization(rank in 2i64..=6, c in -20i64..20) {
            let r = ring_proj_bundle_over_p1(rank, int(c)).unwrap();
            let z = r.gen("zeta").unwrap();
            let f = r.gen("f").unwrap();
            prop_assert_eq!(z.pow(rank as u32 - 1).multiply(&f).unwrap().integrate().unwrap(), int(1));
            prop_assert_eq!(z.pow(rank as u32).integrate().unwrap(), int(c));
        }

        #[test]
        fn integration_is_linear(a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9) {
            let r = ring_proj_bundle_over_p1(3, var("u"));
            let r = r.unwrap();
            let x = r.parse_class(&format!("({a})*zeta^3 + ({b})*zeta^2*f")).unwrap();
            let y = r.parse_class(&format!("({c})*zeta^3 + ({d})*zeta^2*f")).unwrap();
            let lhs = x.add(&y).unwrap().integrate().unwrap();
            let rhs = x.integrate().unwrap() + y.integrate().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn grassmann_twist_invariance(l in -6i64..6, c in -30i64..30) {
            // ∫zeta^7 - 14 c1 does not move under zeta -> zeta + 2lf, c1 -> c1 + 5l.
            let before = ring_grassmann_bundle_g25(int(c));
            let after = ring_grassmann_bundle_g25(int(c + 5 * l));
            let shifted = after.parse_class(&format!("(zeta + ({})*f)^7", 2 * l)).unwrap().integrate().unwrap();
            let lhs = before.parse_class("zeta^7").unwrap().integrate().unwrap() - int(14 * c);
            // Twisting the Plücker class back recovers the untwisted integral.
            let unshifted = after.parse_class(&format!("(zeta - ({})*f)^7", 2 * l)).unwrap().integrate().unwrap();
            prop_assert_eq!(unshifted - int(14 * c), lhs.clone());
            prop_assert_eq!(shifted - int(14 * (c + 5 * l)) - int(70 * l), lhs);
        }
    }
}
