//! Mechanical certification that every higher boundary coefficient of
//! `Y = aλ - bδ - X` is non-negative at a fixed `(d, g)`.
//!
//! Each partial pencil record `p` lying in a boundary divisor yields, after
//! intersecting with `X = aλ - bδ - Y`,
//!
//! ```text
//! Σ_Δ c(Δ) (Δ·p) = a (λ·p) - b (δ·p) - X·p
//! ```
//!
//! Solving for the coefficient of the source divisor gives an inequality
//! `c(source) >= Σ coef · c(target) + slack` (an equality when `X·p` is
//! known exactly). Rules are derived from the records here, never typed
//! in. The certifier then propagates lower bounds through the rule graph,
//! grounding every chain in divisors whose coefficient is known.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divisor_classes::{admissible, class_x, class_x_at, ClassError};
use crate::family_calc::{
    partial_pencil_record, FamilyError, Hit, HitRole, PencilKind, PencilParams, PencilRecord,
};
use crate::graphs::{
    degenerate_split, enumerate_two_vertex, rational_ram_reduce, s3, s3_ramified, s4, two_vertex,
    CompactGraph, DivisorType, DualGraph, GraphError, Side,
};
use crate::symkernel::{int, rat, var, Poly, SymError, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum YeffError {
    #[error("(d, g) = ({d}, {g}) is outside the range where X is divisorial")]
    NotAdmissible { d: i64, g: i64 },
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("rule from {kind} has a positive source hit but X·p is only bounded below")]
    InexactSource { kind: String },
    #[error(
        "rule from {kind} puts coefficient {coefficient} on {label}; lower bounds cannot propagate"
    )]
    NegativeCoefficient {
        kind: String,
        label: String,
        coefficient: Q,
    },
    #[error("symbolic and numeric slack disagree for {kind}: {symbolic} vs {numeric}")]
    SlackMismatch {
        kind: String,
        symbolic: Q,
        numeric: Q,
    },
    #[error("propagation failed at {label}: lower bound {lower_bound}")]
    PropagationFailure { label: String, lower_bound: Q },
    #[error("no rule reaches {label}: {reason}")]
    Unreachable { label: String, reason: String },
    #[error("certificate replay failed: {0}")]
    Replay(String),
}

// ---------------------------------------------------------------------------
// The class X at a point
// ---------------------------------------------------------------------------

/// Numeric `X` together with the symbolic `a(g), b(g)` and weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XData {
    pub d: i64,
    pub g: i64,
    pub scale: Q,
    pub a: Q,
    pub b: Q,
    pub weight_m: Q,
    pub weight_ce: Q,
    #[serde(skip)]
    symbolic: SymbolicX,
}

#[derive(Clone, Debug, PartialEq, Default)]
struct SymbolicX {
    a: Poly,
    b: Poly,
    wm: Poly,
    wce: Poly,
}

fn symbolic_x(d: i64) -> Result<SymbolicX, YeffError> {
    let cx = class_x(d)?;
    let p = |r: &crate::symkernel::RationalFunction| {
        r.as_poly()
            .ok_or_else(|| YeffError::Sym(SymError::NotPolynomial(r.to_string())))
    };
    Ok(SymbolicX {
        a: p(&cx.a)?,
        b: p(&cx.b)?,
        wm: p(&cx.weight_m)?,
        wce: p(&cx.weight_ce)?,
    })
}

impl XData {
    pub fn at(d: i64, g: i64) -> Result<XData, YeffError> {
        XData::scaled(d, g, Q::one())
    }

    /// `X` multiplied by a positive rational.
    pub fn scaled(d: i64, g: i64, scale: Q) -> Result<XData, YeffError> {
        if !admissible(d, g) {
            return Err(YeffError::NotAdmissible { d, g });
        }
        let x = class_x_at(d, g)?;
        Ok(XData {
            d,
            g,
            a: &x.a * &scale,
            b: &x.b * &scale,
            weight_m: &x.weight_m * &scale,
            weight_ce: &x.weight_ce * &scale,
            scale,
            symbolic: symbolic_x(d)?,
        })
    }
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub coefficient: Q,
}

/// A hit that does not enter the rule, with the reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DroppedTerm {
    pub label: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityRule {
    pub id: String,
    pub source: String,
    pub targets: Vec<Term>,
    pub slack: Q,
    /// The slack as a polynomial in `g`, `gR` and the ceiling parameters
    /// (`v`, `kR`, `mR`), before evaluation. Only for unit scale.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbolic_slack: Option<Poly>,
    pub record: PencilKind,
    pub params: BTreeMap<String, i64>,
    /// `X·p` is known exactly, so the rule is an equality.
    pub exact: bool,
    pub provenance: String,
    pub reconstructed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dropped: Vec<DroppedTerm>,
}

/// The symbolic `M·p` of records whose Maroni intersection is exact.
fn maroni_expr(kind: PencilKind) -> Option<Poly> {
    let km = &var("kR") + &var("mR");
    match kind {
        PencilKind::PentagonalUnramified5pts => Some(km),
        PencilKind::PentagonalBasechange => Some(km * int(120)),
        _ => None,
    }
}

/// How a record's hits map to graphs.
struct RuleSpec {
    kind: PencilKind,
    params: PencilParams,
    source_role: HitRole,
    targets: Vec<(HitRole, DualGraph)>,
    provenance: String,
    variant: String,
}

fn record_assignment(rec: &PencilRecord, g: i64) -> BTreeMap<String, Q> {
    let mut m: BTreeMap<String, Q> = rec
        .params
        .iter()
        .map(|(k, v)| (k.clone(), Q::int(*v)))
        .collect();
    m.insert("g".into(), Q::int(g));
    m
}

fn derive_rule(spec: RuleSpec, source: &DualGraph, x: &XData) -> Result<InequalityRule, YeffError> {
    let rec = partial_pencil_record(spec.kind, &spec.params)?;
    let kind = spec.kind.label().to_string();
    let hs = rec
        .hit(spec.source_role)
        .ok_or_else(|| YeffError::Unreachable {
            label: source.label(),
            reason: format!("{kind} has no source hit"),
        })?
        .value
        .clone();
    let exact = rec.maroni_hit.is_exact() && rec.ce_hit.is_exact();
    if !hs.is_negative() && !exact {
        return Err(YeffError::InexactSource { kind });
    }

    let mut coefs: BTreeMap<String, Q> = BTreeMap::new();
    let mut dropped = Vec::new();
    for (role, gr) in &spec.targets {
        let h = match rec.hit(*role) {
            Some(h) => h.value.clone(),
            None => continue,
        };
        let label = gr.label();
        if gr.classify() == DivisorType::NotDivisor {
            dropped.push(DroppedTerm {
                label,
                reason: "not a boundary divisor".into(),
            });
            continue;
        }
        let c = -(&h / &hs);
        if c.is_negative() {
            return Err(YeffError::NegativeCoefficient {
                kind,
                label,
                coefficient: c,
            });
        }
        let e = coefs.entry(label).or_insert_with(Q::zero);
        *e += &c;
    }

    let x_low = &(&x.weight_m * &rec.maroni_hit.lower_bound())
        + &(&x.weight_ce * &rec.ce_hit.lower_bound());
    let raw = &(&(&x.a * &rec.lambda) - &(&x.b * &rec.delta)) - &x_low;
    let slack = &raw / &hs;

    let symbolic_slack = if x.scale.is_one() {
        let s = &x.symbolic;
        let m = match (&rec.maroni_hit, maroni_expr(spec.kind)) {
            (Hit::Exact(_), Some(e)) => e,
            (Hit::Exact(q), None) => Poly::constant(q.clone()),
            (Hit::NonNegative, _) => Poly::zero(),
        };
        let ce = Poly::constant(rec.ce_hit.lower_bound());
        let xs = &(&s.wm * &m) + &(&s.wce * &ce);
        let raw_s = &(&(&s.a * &rec.lambda_expr) - &(&s.b * &rec.delta_expr)) - &xs;
        let sym = raw_s.scale(&hs.recip()?);
        let check = sym.eval(&record_assignment(&rec, x.g))?;
        if check != slack {
            return Err(YeffError::SlackMismatch {
                kind,
                symbolic: check,
                numeric: slack,
            });
        }
        Some(sym)
    } else {
        None
    };

    let source_label = source.label();
    Ok(InequalityRule {
        id: format!("{}{}@{}", kind, spec.variant, source_label),
        source: source_label,
        targets: coefs
            .into_iter()
            .map(|(label, coefficient)| Term { label, coefficient })
            .collect(),
        slack,
        symbolic_slack,
        record: spec.kind,
        params: rec.params.clone(),
        exact,
        provenance: spec.provenance,
        reconstructed: rec.reconstructed,
        dropped,
    })
}

/// The degree-`d` graph reached when the varied side of genus `g_v`
/// splits off; `g_o` is the genus of the fixed side and `k` the number of
/// edges.
fn split_target(d: i64, k: i64, g_o: i64, g_v: i64) -> Result<DualGraph, GraphError> {
    let g_f = if d == 5 { 1 } else { 0 };
    let left = g_o + g_f + k - 1;
    let gamma = g_v - g_f - d + 1;
    if gamma >= 0 {
        two_vertex(&vec![1; d as usize], left, gamma)
    } else {
        degenerate_split(d, left, gamma)
    }
}

/// Lower the largest local degree by one and the varied genus by one.
fn ram_target(profile: &[i64], g_o: i64, g_v: i64) -> Result<DualGraph, GraphError> {
    let mut p = profile.to_vec();
    p.sort_unstable_by(|a, b| b.cmp(a));
    p[0] -= 1;
    p.push(1);
    p.sort_unstable_by(|a, b| b.cmp(a));
    two_vertex(&p, g_o, g_v - 1)
}

fn params(g_r: i64, g: i64, profile: Option<Vec<i64>>) -> PencilParams {
    PencilParams {
        g_r,
        g: Some(g),
        profile,
    }
}

/// Rules for a 2-vertex graph, varying the side of genus `g_v`.
fn two_vertex_specs(
    d: i64,
    g: i64,
    profile: &[i64],
    g_o: i64,
    g_v: i64,
) -> Result<Vec<RuleSpec>, YeffError> {
    use PencilKind::*;
    let k = profile.len() as i64;
    let unramified = profile.iter().all(|&p| p == 1);
    let spl = || split_target(d, k, g_o, g_v);
    let ram = || ram_target(profile, g_o, g_v);
    let mut out = Vec::new();
    let mk = |kind, p: PencilParams, targets, provenance: &str| RuleSpec {
        kind,
        params: p,
        source_role: HitRole::Containing,
        targets,
        provenance: provenance.to_string(),
        variant: String::new(),
    };
    match d {
        3 => {
            let (kind, prov) = match profile {
                [1, 1, 1] => (TrigonalUnramified3pts, "trigonal partial pencil, three unramified gluing points"),
                [2, 1] => (TrigonalRamified21, "trigonal partial pencil, base scheme {2p1, p2} on a ruling"),
                _ => (TrigonalRamified3, "trigonal partial pencil, base scheme {3p1} on a ruling"),
            };
            let mut t = vec![(HitRole::Split, spl()?)];
            if !unramified {
                t.push((HitRole::Reduced, ram()?));
            }
            out.push(mk(kind, params(g_v, g, None), t, prov));
        }
        4 => {
            let (kind, prof, prov) = match profile {
                [1, 1, 1, 1] => (TetragonalUnramified4pts, None, "tetragonal partial pencil, four points in a conic fiber"),
                [2, 1, 1] => (TetragonalRamified2pp, None, "tetragonal partial pencil, base scheme {2p1, p2, p3}"),
                _ => (
                    TetragonalRamified,
                    Some(profile.to_vec()),
                    "tetragonal partial pencil with a non-reduced base scheme of the given profile",
                ),
            };
            let mut t = vec![(HitRole::Split, spl()?)];
            if !unramified {
                t.push((HitRole::Reduced, ram()?));
            }
            out.push(mk(kind, params(g_v, g, prof), t, prov));
        }
        5 => match profile {
            [1, 1, 1, 1, 1] => out.push(mk(
                PentagonalUnramified5pts,
                params(g_v, g, None),
                vec![(HitRole::Split, spl()?)],
                "pentagonal partial pencil in |H1| with a fiber of the elliptic fibration as base locus",
            )),
            [2, 1, 1, 1] => {
                // Both orientations: the pentagonal side is either vertex.
                for (x, y) in [(g_o, g_v), (g_v, g_o)] {
                    if x >= 1 && y >= 1 {
                        let containing = two_vertex(&[1, 1, 1, 1, 1], x - 1, y)?;
                        out.push(RuleSpec {
                            kind: PentagonalBasechange,
                            params: params(y, g, None),
                            source_role: HitRole::Collision,
                            targets: vec![(HitRole::Containing, containing)],
                            provenance: "base change of the pentagonal partial pencil along the monodromy cover of a fixed fiber"
                                .into(),
                            variant: format!("[gR={y}]"),
                        });
                    }
                }
            }
            _ => out.push(mk(
                PentagonalRamified,
                params(g_v, g, Some(profile.to_vec())),
                vec![(HitRole::Split, spl()?), (HitRole::Reduced, ram()?)],
                "pentagonal partial pencil with a ramified base profile",
            )),
        },
        _ => {}
    }
    Ok(out)
}

/// Rules varying a rational vertex on an all-rational side.
fn rational_specs(gr: &DualGraph, side: Side, g: i64) -> Result<Vec<RuleSpec>, YeffError> {
    let mut best: Option<(&crate::graphs::Vertex, Vec<i64>)> = None;
    for v in gr.side_vertices(side).filter(|v| v.degree >= 2) {
        let p = gr.profile_at(v.id);
        let better = match &best {
            None => true,
            Some((_, bp)) => p[0] > bp[0],
        };
        if better {
            best = Some((v, p));
        }
    }
    let Some((v, profile)) = best else {
        return Ok(vec![]);
    };
    let ramified = profile[0] > 1;
    let spec = if ramified {
        RuleSpec {
            kind: PencilKind::RationalRamified,
            params: params(0, g, Some(profile.clone())),
            source_role: HitRole::Containing,
            targets: vec![(HitRole::Reduced, rational_ram_reduce(gr, v.id)?)],
            provenance:
                "rational partial pencil with the largest gluing multiplicity lowered by one".into(),
            variant: String::new(),
        }
    } else {
        RuleSpec {
            kind: PencilKind::RationalUnramified,
            params: params(0, g, Some(profile.clone())),
            source_role: HitRole::Containing,
            targets: vec![],
            provenance: "rational partial pencil; the split fiber is blown down".into(),
            variant: String::new(),
        }
    };
    Ok(vec![spec])
}

/// The small multi-vertex shapes of degree three.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    S3 { g_l: i64, g_r: i64 },
    S3r { g_l: i64, g_r: i64 },
    S4 { g_l: i64, g_r: i64 },
}

fn detect_shapes(gr: &DualGraph, d: i64) -> Vec<Shape> {
    let mut out = Vec::new();
    if d != 3 {
        return out;
    }
    let label = gr.label();
    let hyper = |side: Side| {
        gr.side_vertices(side)
            .find(|v| v.degree == 2)
            .map(|v| v.genus)
    };
    match gr.vertices.len() {
        3 => {
            for side in [Side::L, Side::R] {
                let single: Vec<_> = gr.side_vertices(side.other()).collect();
                if single.len() == 1 {
                    if let Some(h) = hyper(side) {
                        let t = single[0].genus;
                        if label == s3(t, h).label() {
                            out.push(Shape::S3 { g_l: t, g_r: h });
                        }
                        if label == s3_ramified(t, h).label() {
                            out.push(Shape::S3r { g_l: t, g_r: h });
                        }
                    }
                }
            }
        }
        4 => {
            if let (Some(a), Some(b)) = (hyper(Side::L), hyper(Side::R)) {
                if label == s4(a, b).label() {
                    out.push(Shape::S4 {
                        g_l: a.max(b),
                        g_r: a.min(b),
                    });
                }
            }
        }
        _ => {}
    }
    out.dedup();
    out
}

fn shape_specs(shape: Shape, g: i64) -> Vec<RuleSpec> {
    let spec = |kind, g_r: i64, targets, provenance: &str| RuleSpec {
        kind,
        params: params(g_r, g, None),
        source_role: HitRole::Containing,
        targets,
        provenance: provenance.into(),
        variant: String::new(),
    };
    match shape {
        Shape::S3 { g_l, g_r } if g_r >= 1 => vec![spec(
            PencilKind::Hyperelliptic3vertex,
            g_r,
            vec![(HitRole::Split, s3(g_l + 1, g_r - 1))],
            "hyperelliptic partial pencil on F_gR with two base points on a ruling",
        )],
        Shape::S3r { g_l, g_r } if g_r >= 1 => vec![spec(
            PencilKind::Hyperelliptic3vertexRamified,
            g_r,
            vec![
                (HitRole::Split, s3(g_l, g_r - 1)),
                (HitRole::Reduced, s3(g_l, g_r - 1)),
            ],
            "hyperelliptic partial pencil with a tangency base point on a ruling",
        )],
        Shape::S4 { g_l, g_r } if g_r >= 1 => vec![spec(
            PencilKind::Hyperelliptic4vertex,
            g_r,
            vec![(HitRole::Split, s3(g_l, g_r - 1))],
            "hyperelliptic partial pencil; the rational tail's gluing point leaves δ alone",
        )],
        _ => vec![],
    }
}

/// Every rule that applies to `gr`.
pub fn rules_for_graph(gr: &DualGraph, x: &XData) -> Result<Vec<InequalityRule>, YeffError> {
    let (d, g) = (x.d, x.g);
    let mut specs = Vec::new();
    if let Some((profile, g_l, g_r)) = gr.as_two_vertex() {
        let (g_v, g_o) = (g_l.min(g_r), g_l.max(g_r));
        if g_v == 0 {
            let side = if g_r == 0 { Side::R } else { Side::L };
            specs.extend(rational_specs(gr, side, g)?);
        } else {
            specs.extend(two_vertex_specs(d, g, &profile, g_o, g_v)?);
        }
    } else {
        for shape in detect_shapes(gr, d) {
            specs.extend(shape_specs(shape, g));
        }
        for side in [Side::R, Side::L] {
            if gr.side_vertices(side).all(|v| v.genus == 0) {
                specs.extend(rational_specs(gr, side, g)?);
                break;
            }
        }
    }
    specs.into_iter().map(|s| derive_rule(s, gr, x)).collect()
}

/// The enumerated graphs: every higher 2-vertex graph and, in degree 3,
/// the 3- and 4-vertex hyperelliptic shapes.
pub fn universe(d: i64, g: i64) -> Vec<DualGraph> {
    let mut out: Vec<DualGraph> = enumerate_two_vertex(d, g);
    if d == 3 {
        for g_r in 1..g {
            out.push(s3(g - 1 - g_r, g_r));
        }
        for g_r in 1..=g {
            out.push(s3_ramified(g - g_r, g_r));
        }
        for g_r in 1..=g / 2 {
            out.push(s4(g - g_r, g_r));
        }
    }
    let mut seen = HashSet::new();
    out.into_iter()
        .filter(|gr| gr.classify() == DivisorType::Higher)
        .filter(|gr| seen.insert(gr.label()))
        .collect()
}

/// Every rule applying to an enumerated graph at `(d, g)`.
pub fn build_rules(d: i64, g: i64) -> Result<Vec<InequalityRule>, YeffError> {
    let x = XData::at(d, g)?;
    let mut out = Vec::new();
    for gr in universe(d, g) {
        out.extend(rules_for_graph(&gr, &x)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepTerm {
    pub label: String,
    pub coefficient: Q,
    pub lower_bound: Q,
}

/// One application of a rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    pub source: String,
    pub terms: Vec<StepTerm>,
    pub slack: Q,
    pub result: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphCertificate {
    pub graph: CompactGraph,
    pub divisor_type: DivisorType,
    pub enumerated: bool,
    pub excess: i64,
    /// Genus of the smaller side.
    pub g_r: i64,
    pub ramification_index: i64,
    pub lower_bound: Option<Q>,
    /// Why the bound holds without a rule (coefficient known to vanish).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unreachable: Option<String>,
    pub derivation_chain: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Failed { label: String, reason: String },
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Certified => f.write_str("certified"),
            Status::Failed { label, reason } => write!(f, "failed at {label}: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub d: i64,
    pub g: i64,
    pub x: XData,
    /// Labels in the order `(excess, gR, ramification index, label)`.
    pub order: Vec<String>,
    pub per_graph: BTreeMap<String, GraphCertificate>,
    pub rules: BTreeMap<String, InequalityRule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_d4: Option<bool>,
    pub status: Status,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn enumerated_count(&self) -> usize {
        self.per_graph.values().filter(|c| c.enumerated).count()
    }

    /// The status as a `Result`.
    pub fn into_result(self) -> Result<Certificate, YeffError> {
        match &self.status {
            Status::Certified => Ok(self),
            Status::Failed { label, reason } => match self
                .per_graph
                .get(label)
                .and_then(|c| c.lower_bound.clone())
            {
                Some(lb) => Err(YeffError::PropagationFailure {
                    label: label.clone(),
                    lower_bound: lb,
                }),
                None => Err(YeffError::Unreachable {
                    label: label.clone(),
                    reason: reason.clone(),
                }),
            },
        }
    }
}

#[derive(Clone, Debug)]
enum Resolved {
    Base(String),
    Rule { lower_bound: Q, rule: String },
    Unreachable(String),
}

struct Engine<'a> {
    x: &'a XData,
    graphs: BTreeMap<String, DualGraph>,
    memo: BTreeMap<String, Resolved>,
    rules: BTreeMap<String, InequalityRule>,
    on_stack: BTreeSet<String>,
}

impl<'a> Engine<'a> {
    fn lower_bound(&self, label: &str) -> Option<Q> {
        match self.memo.get(label)? {
            Resolved::Base(_) => Some(Q::zero()),
            Resolved::Rule { lower_bound, .. } => Some(lower_bound.clone()),
            Resolved::Unreachable(_) => None,
        }
    }

    fn resolve(&mut self, gr: &DualGraph) -> Result<(), YeffError> {
        let label = gr.label();
        if self.memo.contains_key(&label) {
            return Ok(());
        }
        self.graphs
            .entry(label.clone())
            .or_insert_with(|| gr.canonical());
        let res = match gr.classify() {
            DivisorType::Relevant => {
                Resolved::Base("two branch points on one side: coefficient 0 in Y".into())
            }
            DivisorType::NotDivisor => Resolved::Unreachable("not a boundary divisor".into()),
            DivisorType::Higher => {
                self.on_stack.insert(label.clone());
                let rules = rules_for_graph(gr, self.x)?;
                let mut best: Option<(Q, String)> = None;
                let mut reasons = Vec::new();
                for rule in rules {
                    let mut total = rule.slack.clone();
                    let mut ok = true;
                    for t in &rule.targets {
                        if self.on_stack.contains(&t.label) {
                            reasons.push(format!("{}: cycle through {}", rule.id, t.label));
                            ok = false;
                            break;
                        }
                        let tg = self.target_graph(&rule, &t.label, gr)?;
                        self.resolve(&tg)?;
                        match self.lower_bound(&t.label) {
                            Some(lb) => total += &(&t.coefficient * &lb),
                            None => {
                                reasons
                                    .push(format!("{}: target {} unreachable", rule.id, t.label));
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok && best.as_ref().is_none_or(|(b, _)| total > *b) {
                        best = Some((total, rule.id.clone()));
                    }
                    self.rules.insert(rule.id.clone(), rule);
                }
                self.on_stack.remove(&label);
                match best {
                    Some((lower_bound, rule)) => Resolved::Rule { lower_bound, rule },
                    None if reasons.is_empty() => {
                        Resolved::Unreachable("no recorded family applies".into())
                    }
                    None => Resolved::Unreachable(reasons.join("; ")),
                }
            }
        };
        self.memo.insert(label, res);
        Ok(())
    }

    /// Rebuild the target graph of a rule from its label by re-running
    /// the spec that produced it.
    fn target_graph(
        &mut self,
        rule: &InequalityRule,
        label: &str,
        source: &DualGraph,
    ) -> Result<DualGraph, YeffError> {
        if let Some(g) = self.graphs.get(label) {
            return Ok(g.clone());
        }
        for tg in spec_targets(source, self.x)? {
            let l = tg.label();
            self.graphs.entry(l).or_insert_with(|| tg.canonical());
        }
        self.graphs
            .get(label)
            .cloned()
            .ok_or_else(|| YeffError::Unreachable {
                label: label.to_string(),
                reason: format!("target of {} could not be rebuilt", rule.id),
            })
    }

    fn chain(&self, label: &str, out: &mut Vec<Step>, seen: &mut BTreeSet<String>) {
        if !seen.insert(label.to_string()) {
            return;
        }
        if let Some(Resolved::Rule { lower_bound, rule }) = self.memo.get(label) {
            let r = &self.rules[rule];
            let mut terms = Vec::new();
            for t in &r.targets {
                self.chain(&t.label, out, seen);
                terms.push(StepTerm {
                    label: t.label.clone(),
                    coefficient: t.coefficient.clone(),
                    lower_bound: self.lower_bound(&t.label).unwrap_or_else(Q::zero),
                });
            }
            out.push(Step {
                rule: rule.clone(),
                source: label.to_string(),
                terms,
                slack: r.slack.clone(),
                result: lower_bound.clone(),
            });
        }
    }
}

/// All graphs any rule for `source` points at.
fn spec_targets(source: &DualGraph, x: &XData) -> Result<Vec<DualGraph>, YeffError> {
    let (d, g) = (x.d, x.g);
    let mut specs = Vec::new();
    if let Some((profile, g_l, g_r)) = source.as_two_vertex() {
        let (g_v, g_o) = (g_l.min(g_r), g_l.max(g_r));
        if g_v == 0 {
            let side = if g_r == 0 { Side::R } else { Side::L };
            specs.extend(rational_specs(source, side, g)?);
        } else {
            specs.extend(two_vertex_specs(d, g, &profile, g_o, g_v)?);
        }
    } else {
        for shape in detect_shapes(source, d) {
            specs.extend(shape_specs(shape, g));
        }
        for side in [Side::R, Side::L] {
            if source.side_vertices(side).all(|v| v.genus == 0) {
                specs.extend(rational_specs(source, side, g)?);
                break;
            }
        }
    }
    Ok(specs
        .into_iter()
        .flat_map(|s| s.targets.into_iter().map(|(_, gr)| gr))
        .collect())
}

fn order_key(gr: &DualGraph) -> (i64, i64, i64) {
    let g_r = gr.side_genus(Side::L).min(gr.side_genus(Side::R));
    (gr.excess(), g_r, gr.ramification_index())
}

/// Certify `c(Δ, Y) >= 0` for every enumerated graph at `(d, g)`.
pub fn certify(d: i64, g: i64) -> Result<Certificate, YeffError> {
    certify_with(XData::at(d, g)?)
}

/// As [`certify`] with `X` multiplied by `scale > 0`.
pub fn certify_scaled(d: i64, g: i64, scale: Q) -> Result<Certificate, YeffError> {
    certify_with(XData::scaled(d, g, scale)?)
}

fn certify_with(x: XData) -> Result<Certificate, YeffError> {
    let (d, g) = (x.d, x.g);
    let enumerated = universe(d, g);
    let enumerated_labels: BTreeSet<String> = enumerated.iter().map(|g| g.label()).collect();
    let mut eng = Engine {
        x: &x,
        graphs: BTreeMap::new(),
        memo: BTreeMap::new(),
        rules: BTreeMap::new(),
        on_stack: BTreeSet::new(),
    };
    for gr in &enumerated {
        eng.resolve(gr)?;
    }

    let mut per_graph = BTreeMap::new();
    for (label, res) in &eng.memo {
        let gr = &eng.graphs[label];
        let mut chain = Vec::new();
        eng.chain(label, &mut chain, &mut BTreeSet::new());
        let (lower_bound, base, unreachable) = match res {
            Resolved::Base(why) => (Some(Q::zero()), Some(why.clone()), None),
            Resolved::Rule { lower_bound, .. } => (Some(lower_bound.clone()), None, None),
            Resolved::Unreachable(why) => (None, None, Some(why.clone())),
        };
        per_graph.insert(
            label.clone(),
            GraphCertificate {
                graph: gr.to_compact(),
                divisor_type: gr.classify(),
                enumerated: enumerated_labels.contains(label),
                excess: gr.excess(),
                g_r: gr.side_genus(Side::L).min(gr.side_genus(Side::R)),
                ramification_index: gr.ramification_index(),
                lower_bound,
                base,
                unreachable,
                derivation_chain: chain,
            },
        );
    }

    let mut order: Vec<String> = per_graph.keys().cloned().collect();
    order.sort_by_key(|l| (order_key(&eng.graphs[l]), l.clone()));

    // Keep only the rules used somewhere in a chain.
    let used: BTreeSet<String> = per_graph
        .values()
        .flat_map(|c| c.derivation_chain.iter().map(|s| s.rule.clone()))
        .collect();
    let rules: BTreeMap<String, InequalityRule> = eng
        .rules
        .iter()
        .filter(|(k, _)| used.contains(*k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();

    let closed_form_d4 = if d == 4 {
        Some(check_closed_form_d4(g))
    } else {
        None
    };

    let mut status = Status::Certified;
    for label in &order {
        let c = &per_graph[label];
        if c.divisor_type == DivisorType::NotDivisor {
            continue;
        }
        let reason = match (&c.lower_bound, &c.unreachable) {
            (_, Some(why)) => Some(format!("unreachable ({why})")),
            (Some(lb), None) if lb.is_negative() => Some(format!("negative lower bound {lb}")),
            _ => None,
        };
        if let Some(reason) = reason {
            status = Status::Failed {
                label: label.clone(),
                reason,
            };
            break;
        }
    }
    if status == Status::Certified && closed_form_d4 == Some(false) {
        status = Status::Failed {
            label: "summed tetragonal inequality".into(),
            reason: "closed form negative".into(),
        };
    }

    Ok(Certificate {
        d,
        g,
        x,
        order,
        per_graph,
        rules,
        closed_form_d4,
        status,
    })
}

/// Re-run every derivation chain against the certificate's own numbers.
pub fn verify_certificate(cert: &Certificate) -> Result<(), YeffError> {
    let fail = |m: String| Err(YeffError::Replay(m));
    for (label, entry) in &cert.per_graph {
        let graph = DualGraph::from_compact(&entry.graph)?;
        if graph.label() != *label {
            return fail(format!("stored graph does not have label {label}"));
        }
        if entry.base.is_some() {
            if graph.classify() != DivisorType::Relevant || entry.lower_bound != Some(Q::zero()) {
                return fail(format!("{label} is not a zero-coefficient base case"));
            }
            continue;
        }
        let Some(lb) = &entry.lower_bound else {
            continue;
        };
        let mut local: BTreeMap<&str, Q> = BTreeMap::new();
        for step in &entry.derivation_chain {
            let Some(rule) = cert.rules.get(&step.rule) else {
                return fail(format!("unknown rule {}", step.rule));
            };
            if rule.source != step.source
                || rule.slack != step.slack
                || rule.targets.len() != step.terms.len()
            {
                return fail(format!(
                    "step for {} does not match rule {}",
                    step.source, rule.id
                ));
            }
            let mut total = rule.slack.clone();
            for (t, st) in rule.targets.iter().zip(&step.terms) {
                if t.label != st.label || t.coefficient != st.coefficient {
                    return fail(format!(
                        "term {} of {} does not match its rule",
                        st.label, rule.id
                    ));
                }
                let known = match local.get(st.label.as_str()) {
                    Some(q) => q.clone(),
                    None => match cert.per_graph.get(&st.label) {
                        Some(c) if c.base.is_some() => Q::zero(),
                        _ => return fail(format!("{} is used before it is derived", st.label)),
                    },
                };
                if known != st.lower_bound {
                    return fail(format!(
                        "{} has bound {} but the step uses {}",
                        st.label, known, st.lower_bound
                    ));
                }
                total += &(&t.coefficient * &known);
            }
            if total != step.result {
                return fail(format!(
                    "step for {} gives {} not {}",
                    step.source, total, step.result
                ));
            }
            local.insert(step.source.as_str(), total);
        }
        if local.get(label.as_str()) != Some(lb) {
            return fail(format!(
                "chain for {label} does not end at its lower bound {lb}"
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// The summed tetragonal inequality
// ---------------------------------------------------------------------------

/// `3(13b/2 - a) C(i+1, 2) + ((13k/2 + 7/2) b - k a) i` at `(d, g) = (4, g)`.
pub fn d4_closed_form_value(g: i64, i: i64, k: i64) -> Q {
    let a = Q::int(13 * g + 15);
    let b = Q::int(2 * g);
    let c1 = (&(&b * &Q::new(13, 2)) - &a) * Q::int(3);
    let c2 = &(&b * &(Q::new(13 * k + 7, 2))) - &(&a * &Q::int(k));
    &(&c1 * &Q::int(i * (i + 1) / 2)) + &(&c2 * &Q::int(i))
}

/// Whether the summed quantity is non-negative for all `i >= 0`,
/// `k ∈ {0, 1, 2}` with `3i + k <= (g - 3)/2`.
pub fn check_closed_form_d4(g: i64) -> bool {
    for k in 0..=2 {
        let mut i = 0;
        while 2 * (3 * i + k) <= g - 3 {
            if d4_closed_form_value(g, i, k).is_negative() {
                return false;
            }
            i += 1;
        }
    }
    true
}

/// `Σ_{l=1}^{i} l^p` as a polynomial in `i`, for `p <= 3`.
fn power_sum(p: u32, i: &Poly) -> Option<Poly> {
    let i1 = i + &Poly::one();
    Some(match p {
        0 => i.clone(),
        1 => (i * &i1).scale(&Q::new(1, 2)),
        2 => (&(i * &i1) * &(&i.scale(&Q::int(2)) + &Poly::one())).scale(&Q::new(1, 6)),
        3 => (i * &i1).pow(2).scale(&Q::new(1, 4)),
        _ => return None,
    })
}

/// `Σ_{l=1}^{i} f(l)` for a polynomial `f` of degree at most 3 in `l`.
pub fn sum_over(f: &Poly, l: &str, upper: &str) -> Option<Poly> {
    let i = var(upper);
    let mut out = Poly::zero();
    for (p, c) in f.coefficients_in(l).iter().enumerate() {
        out += &(c * &power_sum(p as u32, &i)?);
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Comparison with the printed slacks
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlackCheck {
    pub name: String,
    pub record: PencilKind,
    pub derived: Poly,
    pub printed: Poly,
    /// Substitution applied to the derived slack before comparison.
    pub substitution: String,
    pub holds: bool,
}

fn symbolic_slack_of(
    kind: PencilKind,
    d: i64,
    profile: Option<Vec<i64>>,
) -> Result<Poly, YeffError> {
    let s = symbolic_x(d)?;
    let rec = partial_pencil_record(
        kind,
        &PencilParams {
            g_r: 3,
            g: None,
            profile,
        },
    )?;
    let hs = rec
        .hit(HitRole::Containing)
        .map(|h| h.value.clone())
        .unwrap_or_else(|| Q::int(-1));
    let m = match (&rec.maroni_hit, maroni_expr(kind)) {
        (Hit::Exact(_), Some(e)) => e,
        (Hit::Exact(q), None) => Poly::constant(q.clone()),
        _ => Poly::zero(),
    };
    let xs = &(&s.wm * &m) + &(&s.wce * &Poly::constant(rec.ce_hit.lower_bound()));
    let raw = &(&(&s.a * &rec.lambda_expr) - &(&s.b * &rec.delta_expr)) - &xs;
    Ok(raw.scale(&hs.recip()?))
}

fn p(s: &str) -> Poly {
    Poly::parse(s).expect("static polynomial")
}

/// Every printed slack against the slack derived from its record and `X`.
pub fn slack_checks() -> Result<Vec<SlackCheck>, YeffError> {
    use PencilKind::*;
    let mut out = Vec::new();
    let mut push = |name: &str, kind, derived: Poly, printed: Poly, substitution: &str| {
        let holds = derived == printed;
        out.push(SlackCheck {
            name: name.into(),
            record: kind,
            derived,
            printed,
            substitution: substitution.into(),
            holds,
        });
    };
    for (name, kind, printed) in [
        ("unramified trigonal", TrigonalUnramified3pts, "3*g - 6*gR"),
        ("simply ramified trigonal", TrigonalRamified21, "4*g - 6*gR"),
        ("triply ramified trigonal", TrigonalRamified3, "6*g - 5*gR"),
        (
            "3-vertex hyperelliptic",
            Hyperelliptic3vertex,
            "g*(gR + 2) - 6*gR",
        ),
        (
            "4-vertex hyperelliptic",
            Hyperelliptic4vertex,
            "g*(gR + 3) - 6*gR",
        ),
    ] {
        push(
            name,
            kind,
            symbolic_slack_of(kind, 3, None)?,
            p(printed),
            "none",
        );
    }
    let s4 = symbolic_x(4)?;
    let per_step = &(&s4.b * &p("v + 6*gR + 2")) - &(&s4.a * &var("gR"));
    push(
        "unramified tetragonal step",
        TetragonalUnramified4pts,
        symbolic_slack_of(TetragonalUnramified4pts, 4, None)?,
        per_step,
        "none",
    );
    let v_relaxed = p("gR/2 + 3/2");
    push(
        "simply ramified tetragonal",
        TetragonalRamified2pp,
        symbolic_slack_of(TetragonalRamified2pp, 4, None)?.substitute("v", &v_relaxed),
        p("9*g - 15*gR"),
        "v = (gR+3)/2",
    );
    let m_relaxed = p("-3/4*gR - 3");
    push(
        "unramified pentagonal",
        PentagonalUnramified5pts,
        symbolic_slack_of(PentagonalUnramified5pts, 5, None)?.substitute("mR", &m_relaxed),
        p("3*g - 11/2*gR"),
        "mR = -3(gR+4)/4",
    );
    let (derived, printed) = d4_summed_identity()?;
    push(
        "summed tetragonal inequality",
        TetragonalUnramified4pts,
        derived,
        printed,
        "gR = 3l+k, v = (3l+k+3)/2, summed over l = 1..i",
    );
    Ok(out)
}

/// The tetragonal per-step slack from the record, relaxed and summed over
/// `l = 1..i`, against the printed closed form (both in `g, k, i`).
pub fn d4_summed_identity() -> Result<(Poly, Poly), YeffError> {
    let step = symbolic_slack_of(PencilKind::TetragonalUnramified4pts, 4, None)?;
    let gr = p("3*l + k");
    let relaxed = step
        .substitute("v", &(&gr.scale(&Q::new(1, 2)) + &rat(3, 2)))
        .substitute("gR", &gr);
    let derived = sum_over(&relaxed, "l", "i")
        .ok_or_else(|| YeffError::Sym(SymError::NotPolynomial("sum".into())))?;
    let s4 = symbolic_x(4)?;
    let (a, b) = (&s4.a, &s4.b);
    let c1 = (&b.scale(&Q::new(13, 2)) - a).scale(&Q::int(3));
    let binom = (&var("i") * &p("i + 1")).scale(&Q::new(1, 2));
    let c2 = &(b * &p("13/2*k + 7/2")) - &(&var("k") * a);
    let printed = &(&c1 * &binom) + &(&c2 * &var("i"));
    Ok((derived, printed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trigonal_rule_from_record() {
        let x = XData::at(3, 6).unwrap();
        let gr = two_vertex(&[1, 1, 1], 3, 1).unwrap();
        let rules = rules_for_graph(&gr, &x).unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].slack, Q::int(12));
        assert_eq!(rules[0].symbolic_slack.as_ref().unwrap(), &p("3*g - 6*gR"));
    }

    #[test]
    fn small_cases_certify() {
        for (d, g) in [(3, 4), (3, 6), (4, 9), (5, 16)] {
            let c = certify(d, g).unwrap();
            assert!(c.is_certified(), "({d},{g}): {}", c.status);
            verify_certificate(&c).unwrap();
        }
    }

    #[test]
    fn scale_does_not_change_status() {
        let a = certify(3, 6).unwrap();
        let b = certify_scaled(3, 6, Q::new(7, 3)).unwrap();
        assert_eq!(a.status, b.status);
        for (l, c) in &a.per_graph {
            let lb = c.lower_bound.clone().map(|q| q * Q::new(7, 3));
            assert_eq!(lb, b.per_graph[l].lower_bound);
        }
    }

    #[test]
    fn closed_form() {
        assert!(check_closed_form_d4(9));
        assert!(check_closed_form_d4(15));
        for k in 0..=2 {
            assert!(d4_closed_form_value(9, 0, k).is_zero());
        }
        let (derived, printed) = d4_summed_identity().unwrap();
        assert_eq!(derived, printed);
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let mut c = certify(3, 4).unwrap();
        let label = c
            .per_graph
            .iter()
            .find(|(_, e)| !e.derivation_chain.is_empty())
            .map(|(l, _)| l.clone())
            .unwrap();
        let e = c.per_graph.get_mut(&label).unwrap();
        e.derivation_chain.last_mut().unwrap().result += &Q::one();
        assert!(verify_certificate(&c).is_err());
    }

    #[test]
    fn not_admissible() {
        assert!(matches!(
            certify(3, 5),
            Err(YeffError::NotAdmissible { .. })
        ));
    }
}
