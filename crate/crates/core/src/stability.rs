//! Slope (semi)stability of rank-1 sheaves with exact arithmetic.
//!
//! For a polarization `H` of total degree `h` and a degree `d`, write
//! `d - g = h t + b` with `0 <= b < h` and set `k_D = h_D (b + 1) / h` for a
//! subcurve `D`. A line bundle `L` is semistable iff for every proper
//! connected subcurve `D`
//!
//! ```text
//! -chi(O_D) + h_D t + k_D  <=  deg L|_D  <=  -chi(O_D) + h_D t + k_D + alpha_D
//! ```
//!
//! and stable iff both inequalities are strict.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

use crate::curve::{transform_at, ComponentSet, CurveError, CurveGraph, PointKind, SplitMode, Subcurve, Transform};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("polarization has {got} entries, curve has {expected} components")]
    PolarizationLength { expected: usize, got: usize },
    #[error("polarization degrees must be positive")]
    NonPositivePolarization,
    #[error("multidegree has {got} entries, curve has {expected} components")]
    MultidegreeLength { expected: usize, got: usize },
    #[error("multidegree sums to {got}, expected {expected}")]
    DegreeMismatch { expected: i64, got: i64 },
    #[error("local type {local} is not legal at {kind} point `{point}`")]
    IllegalLocalType { point: String, kind: PointKind, local: String },
    #[error("local type list has {got} entries, curve has {expected} points")]
    LocalTypeLength { expected: usize, got: usize },
    #[error("zero rank")]
    ZeroRank,
}

/// Degrees `h_i` of a polarization on each component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polarization {
    degrees: Vec<i64>,
}

impl Polarization {
    pub fn new(degrees: Vec<i64>) -> Result<Self, StabilityError> {
        if degrees.iter().any(|&h| h <= 0) {
            return Err(StabilityError::NonPositivePolarization);
        }
        Ok(Polarization { degrees })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn total(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn on(&self, set: ComponentSet) -> i64 {
        set.iter().map(|i| self.degrees[i]).sum()
    }
}

/// Exact value of `k_D` with its integer and fractional parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KValue {
    pub value: Rational64,
    pub is_integer: bool,
    pub floor: i64,
    pub frac: Rational64,
}

impl KValue {
    pub fn new(value: Rational64) -> Self {
        let floor = value.floor().to_integer();
        let frac = value - Rational64::from_integer(floor);
        KValue {
            value,
            is_integer: frac.is_zero(),
            floor,
            frac,
        }
    }
}

/// A connected proper subcurve together with its stability interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bound {
    pub sub: Subcurve,
    pub h: i64,
    /// `-chi_D + h_D t + k_D`
    pub lower: Rational64,
}

impl Bound {
    pub fn upper(&self) -> Rational64 {
        self.lower + Rational64::from_integer(self.sub.alpha)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityContext {
    curve: CurveGraph,
    polarization: Polarization,
    d: i64,
    h: i64,
    t: i64,
    b: i64,
    bounds: Vec<Bound>,
}

pub fn make_context(curve: &CurveGraph, h: &[i64], d: i64) -> Result<StabilityContext, StabilityError> {
    curve.require_connected()?;
    if h.len() != curve.n() {
        return Err(StabilityError::PolarizationLength {
            expected: curve.n(),
            got: h.len(),
        });
    }
    let polarization = Polarization::new(h.to_vec())?;
    let htot = polarization.total();
    let (t, b) = (d - curve.genus()).div_mod_floor(&htot);
    let mut ctx = StabilityContext {
        curve: curve.clone(),
        polarization,
        d,
        h: htot,
        t,
        b,
        bounds: Vec::new(),
    };
    ctx.bounds = curve
        .connected_subcurves()
        .into_iter()
        .map(|sub| {
            let hd = ctx.h_of(sub.members);
            Bound {
                sub,
                h: hd,
                lower: Rational64::from_integer(-sub.chi + hd * t) + ctx.k_of(sub.members).value,
            }
        })
        .collect();
    Ok(ctx)
}

impl StabilityContext {
    pub fn curve(&self) -> &CurveGraph {
        &self.curve
    }

    pub fn polarization(&self) -> &Polarization {
        &self.polarization
    }

    pub fn hs(&self) -> &[i64] {
        self.polarization.degrees()
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn g(&self) -> i64 {
        self.curve.genus()
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn h_of(&self, set: ComponentSet) -> i64 {
        self.polarization.on(set)
    }

    pub fn k_of(&self, set: ComponentSet) -> KValue {
        KValue::new(Rational64::new(self.h_of(set) * (self.b + 1), self.h))
    }

    /// `-chi_D + h_D t + k_D`, the lower end of the semistability interval.
    pub fn lower_of(&self, set: ComponentSet) -> Rational64 {
        Rational64::from_integer(-self.curve.chi_of(set) + self.h_of(set) * self.t) + self.k_of(set).value
    }

    /// Intervals of all proper connected subcurves, lexicographic order.
    pub fn bounds(&self) -> &[Bound] {
        &self.bounds
    }

    /// Same curve and polarization, another degree.
    pub fn with_degree(&self, d: i64) -> StabilityContext {
        let (t, b) = (d - self.g()).div_mod_floor(&self.h);
        let mut ctx = StabilityContext {
            d,
            t,
            b,
            ..self.clone()
        };
        for bd in &mut ctx.bounds {
            bd.lower = Rational64::from_integer(-bd.sub.chi + bd.h * t) + Rational64::new(bd.h * (b + 1), self.h);
        }
        ctx
    }

    fn check_md(&self, md: &[i64]) -> Result<(), StabilityError> {
        if md.len() != self.curve.n() {
            return Err(StabilityError::MultidegreeLength {
                expected: self.curve.n(),
                got: md.len(),
            });
        }
        let sum: i64 = md.iter().sum();
        if sum != self.d {
            return Err(StabilityError::DegreeMismatch {
                expected: self.d,
                got: sum,
            });
        }
        Ok(())
    }
}

/// Slope `(chi(F) - (h_D/h) chi(O_X)) / (h_D/h)` of a sheaf with Euler
/// characteristic `chi_f` supported on a subcurve of polarized degree `rk_numerator`.
pub fn slope(ctx: &StabilityContext, chi_f: i64, rk_numerator: i64) -> Result<Rational64, StabilityError> {
    if rk_numerator == 0 {
        return Err(StabilityError::ZeroRank);
    }
    Ok(Rational64::new(chi_f * ctx.h(), rk_numerator) - Rational64::from_integer(ctx.curve.chi_total()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Status {
    pub fn is_semistable(self) -> bool {
        self != Status::Unstable
    }

    pub fn short(self) -> &'static str {
        match self {
            Status::Stable => "stable",
            Status::StrictlySemistable => "ss",
            Status::Unstable => "unstable",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Subcurve>,
}

impl Verdict {
    pub fn stable() -> Self {
        Verdict {
            status: Status::Stable,
            witness: None,
        }
    }
}

pub fn sum_on(md: &[i64], set: ComponentSet) -> i64 {
    set.iter().map(|i| md[i]).sum()
}

/// Verdict for a line bundle with multidegree `md`.
pub fn classify_line_bundle(ctx: &StabilityContext, md: &[i64]) -> Result<Verdict, StabilityError> {
    ctx.check_md(md)?;
    let mut equality: Option<Subcurve> = None;
    for bd in ctx.bounds() {
        let dd = Rational64::from_integer(sum_on(md, bd.sub.members));
        if dd < bd.lower || dd > bd.upper() {
            return Ok(Verdict {
                status: Status::Unstable,
                witness: Some(bd.sub),
            });
        }
        if equality.is_none() && (dd == bd.lower || dd == bd.upper()) {
            equality = Some(bd.sub);
        }
    }
    Ok(match equality {
        Some(w) => Verdict {
            status: Status::StrictlySemistable,
            witness: Some(w),
        },
        None => Verdict::stable(),
    })
}

/// Stalk type of a rank-1 sheaf at a gluing point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalType {
    /// Invertible at the point.
    Free,
    /// All branches separated.
    Separated,
    /// Pushed forward from the first blow-up (tacnode to node, planar to spatial).
    Blown,
    /// Pushed forward from a node on the two given components, third branch separated.
    Pair(usize, usize),
}

impl LocalType {
    pub fn split_mode(self, kind: PointKind) -> Option<Result<SplitMode, ()>> {
        match (self, kind) {
            (LocalType::Free, _) => None,
            (LocalType::Separated, _) => Some(Ok(SplitMode::Separate)),
            (LocalType::Blown, PointKind::Tacnode) => Some(Ok(SplitMode::ToNode)),
            (LocalType::Blown, PointKind::PlanarTriple) => Some(Ok(SplitMode::ToSpatial)),
            (LocalType::Pair(a, b), PointKind::PlanarTriple | PointKind::SpatialTriple) => {
                Some(Ok(SplitMode::KeepPair(a, b)))
            }
            _ => Some(Err(())),
        }
    }
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalType::Free => f.write_str("free"),
            LocalType::Separated => f.write_str("separated"),
            LocalType::Blown => f.write_str("blown"),
            LocalType::Pair(a, b) => write!(f, "pair:#{a}+#{b}"),
        }
    }
}

/// A rank-1 torsion-free sheaf described by the multidegree of its
/// restrictions (modulo torsion) and its stalk type at every gluing point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SheafDatum {
    pub multidegree: Vec<i64>,
    /// One entry per gluing point, in the curve's point order.
    pub local: Vec<LocalType>,
}

impl SheafDatum {
    pub fn line_bundle(md: Vec<i64>, points: usize) -> Self {
        SheafDatum {
            multidegree: md,
            local: vec![LocalType::Free; points],
        }
    }

    pub fn is_free(&self) -> bool {
        self.local.iter().all(|l| *l == LocalType::Free)
    }
}

/// The partial normalization on which a non-free sheaf is a line bundle,
/// with the accumulated genus drop.
pub fn sheaf_target(x: &CurveGraph, f: &SheafDatum) -> Result<(CurveGraph, i64), StabilityError> {
    if f.local.len() != x.points().len() {
        return Err(StabilityError::LocalTypeLength {
            expected: x.points().len(),
            got: f.local.len(),
        });
    }
    let mut y = x.clone();
    let mut drop = 0;
    for (p, lt) in x.points().iter().zip(&f.local) {
        let illegal = || StabilityError::IllegalLocalType {
            point: p.id.clone(),
            kind: p.kind,
            local: lt.to_string(),
        };
        let mode = match lt.split_mode(p.kind) {
            None => continue,
            Some(Ok(m)) => m,
            Some(Err(())) => return Err(illegal()),
        };
        let t = transform_at(&y, &p.id, mode).map_err(|e| match e {
            CurveError::IllegalMode { .. } => illegal(),
            other => other.into(),
        })?;
        drop += t.genus_drop;
        y = t.target;
    }
    Ok((y, drop))
}

/// Verdict for an arbitrary rank-1 sheaf of total degree `ctx.d()`.
///
/// The multidegree of a non-free sheaf lives on its partial normalization
/// and sums to `d - s`, where `s` is the genus drop.
pub fn classify_sheaf(ctx: &StabilityContext, f: &SheafDatum) -> Result<Verdict, StabilityError> {
    let x = ctx.curve();
    if f.is_free() && f.local.len() == x.points().len() {
        return classify_line_bundle(ctx, &f.multidegree);
    }
    let (y, s) = sheaf_target(x, f)?;
    let md = &f.multidegree;
    if md.len() != x.n() {
        return Err(StabilityError::MultidegreeLength {
            expected: x.n(),
            got: md.len(),
        });
    }
    let total: i64 = md.iter().sum();
    if total != ctx.d() - s {
        return Err(StabilityError::DegreeMismatch {
            expected: ctx.d() - s,
            got: total,
        });
    }
    let h = ctx.hs();
    if y.connected() {
        let sub = make_context(&y, h, ctx.d() - s)?;
        let v = classify_line_bundle(&sub, md)?;
        return Ok(Verdict {
            status: v.status,
            witness: v.witness.map(|w| x.subcurve(w.members)),
        });
    }
    // A direct sum is never stable; every summand must have the slope of F.
    let pieces = y.connected_pieces(y.all());
    for &p in &pieces {
        let chi = sum_on(md, p) + y.chi_of(p);
        // chi / h_p > chi(F) / h  <=>  slope above d
        let chi_f = ctx.d() + x.chi_total();
        if (chi as i128) * (ctx.h() as i128) > (chi_f as i128) * (ctx.h_of(p) as i128) {
            return Ok(Verdict {
                status: Status::Unstable,
                witness: Some(x.subcurve(p)),
            });
        }
    }
    for &p in &pieces {
        let (yp, map) = y.restrict(p);
        let hp: Vec<i64> = map.iter().map(|&i| h[i]).collect();
        let mdp: Vec<i64> = map.iter().map(|&i| md[i]).collect();
        let sub = make_context(&yp, &hp, mdp.iter().sum())?;
        let v = classify_line_bundle(&sub, &mdp)?;
        if v.status == Status::Unstable {
            let w = v.witness.map(|w| w.members.iter().map(|i| map[i]).collect()).unwrap_or(p);
            return Ok(Verdict {
                status: Status::Unstable,
                witness: Some(x.subcurve(w)),
            });
        }
    }
    Ok(Verdict {
        status: Status::StrictlySemistable,
        witness: Some(x.subcurve(pieces[0])),
    })
}

/// Componentwise sum of multidegrees (tensor product of line bundles).
pub fn tensor_multidegree(md1: &[i64], md2: &[i64]) -> Result<Vec<i64>, StabilityError> {
    if md1.len() != md2.len() {
        return Err(StabilityError::MultidegreeLength {
            expected: md1.len(),
            got: md2.len(),
        });
    }
    Ok(md1.iter().zip(md2).map(|(a, b)| a + b).collect())
}

/// Multidegree of the pullback of a line bundle along a transform.
pub fn pullback_multidegree(t: &Transform, md: &[i64]) -> Vec<i64> {
    t.component_map.iter().map(|&i| md[i]).collect()
}
