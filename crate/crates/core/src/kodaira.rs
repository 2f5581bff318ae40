//! Closed-form moduli of rank-1 sheaves on the reducible Kodaira fibers
//! III, IV and I_N, on the curve X' (three lines through a spatial triple
//! point), degree-zero shortcuts, and the component list for two curves
//! meeting at a node.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::curve::{transform_at, ComponentSet, CurveError, CurveGraph, PointKind, SplitMode, Transform};
use crate::stability::{make_context, sheaf_target, sum_on, SheafDatum, StabilityContext, StabilityError, Status, Verdict};
use crate::treelike::{algorithm_degrees, moduli_treelike, JHGrading, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KodairaError {
    #[error("curve is not of type {0}")]
    WrongCurve(&'static str),
    #[error("sheaf has degree {0}, expected 0")]
    NonzeroDegree(i64),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Dimensions of the kernel of `Pic(X) -> prod Pic(C_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KernelDims {
    pub additive: u32,
    pub multiplicative: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    pub transform: Transform,
    pub moduli: ModuliDescription,
}

/// Stable strata and strictly semistable S-equivalence classes, each given
/// by a multidegree indexed by component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliDescription {
    pub component_ids: Vec<String>,
    pub degree: i64,
    pub stable_strata: Vec<Vec<i64>>,
    pub semistable_strata: Vec<Vec<i64>>,
    pub kernel: KernelDims,
    pub boundary: Option<Box<Boundary>>,
    pub notes: Vec<String>,
}

impl ModuliDescription {
    pub fn empty(x: &CurveGraph, degree: i64, kernel: KernelDims) -> Self {
        ModuliDescription {
            component_ids: x.components().iter().map(|c| c.id.clone()).collect(),
            degree,
            stable_strata: Vec::new(),
            semistable_strata: Vec::new(),
            kernel,
            boundary: None,
            notes: Vec::new(),
        }
    }

    /// Sorts and deduplicates the strata.
    pub fn normalize(&mut self) {
        for list in [&mut self.stable_strata, &mut self.semistable_strata] {
            let set: BTreeSet<Vec<i64>> = list.drain(..).collect();
            list.extend(set);
        }
    }

    pub fn stratum_line(&self, md: &[i64]) -> String {
        let parts: Vec<String> = self.component_ids.iter().zip(md).map(|(id, d)| format!("{id}:{d}")).collect();
        format!("stratum {}", parts.join(" "))
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, indent: &str) -> fmt::Result {
        writeln!(f, "{indent}degree {}", self.degree)?;
        writeln!(
            f,
            "{indent}kernel additive={} multiplicative={}",
            self.kernel.additive, self.kernel.multiplicative
        )?;
        writeln!(f, "{indent}stable-strata {}", self.stable_strata.len())?;
        for s in &self.stable_strata {
            writeln!(f, "{indent}{}", self.stratum_line(s))?;
        }
        writeln!(f, "{indent}semistable-strata {}", self.semistable_strata.len())?;
        for s in &self.semistable_strata {
            writeln!(f, "{indent}{}", self.stratum_line(s))?;
        }
        for n in &self.notes {
            writeln!(f, "{indent}note {n}")?;
        }
        match &self.boundary {
            None => writeln!(f, "{indent}boundary none"),
            Some(b) => {
                writeln!(
                    f,
                    "{indent}boundary point={} genus-drop={} degree={}",
                    b.transform.point, b.transform.genus_drop, b.moduli.degree
                )?;
                b.moduli.write_indented(f, &format!("{indent}  "))
            }
        }
    }
}

impl fmt::Display for ModuliDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, "")
    }
}

/// Shapes with a closed-form description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberType {
    III,
    IV,
    Xprime,
    In(usize),
    TreeLike,
}

pub fn fiber_type(x: &CurveGraph) -> Option<FiberType> {
    let pts = x.points();
    let kinds: Vec<PointKind> = pts.iter().map(|p| p.kind).collect();
    match (x.n(), kinds.as_slice()) {
        (2, [PointKind::Tacnode]) => return Some(FiberType::III),
        (3, [PointKind::PlanarTriple]) => return Some(FiberType::IV),
        (3, [PointKind::SpatialTriple]) => return Some(FiberType::Xprime),
        _ => {}
    }
    if x.is_tree_like() {
        return Some(FiberType::TreeLike);
    }
    let n = x.n();
    let cycle = n >= 2
        && x.connected()
        && pts.len() == n
        && kinds.iter().all(|&k| k == PointKind::Node)
        && (0..n).all(|c| pts.iter().filter(|p| p.incident.contains(&c)).count() == 2);
    cycle.then_some(FiberType::In(n))
}

fn require(ctx: &StabilityContext, want: FiberType, name: &'static str) -> Result<(), KodairaError> {
    match (fiber_type(ctx.curve()), want) {
        (Some(FiberType::In(_)), FiberType::In(_)) => Ok(()),
        (Some(t), w) if t == w => Ok(()),
        _ => Err(KodairaError::WrongCurve(name)),
    }
}

fn singleton_data(ctx: &StabilityContext, i: usize) -> (i64, bool) {
    let s = ComponentSet::singleton(i);
    let k = ctx.k_of(s);
    // -chi_i + h_i t + [k_i]
    (-ctx.curve().chi_of(s) + ctx.h_of(s) * ctx.t() + k.floor, k.is_integer)
}

/// Graded degrees on the subcurve `set` for a semistable sheaf of degree
/// `degree`, computed on `set` as a curve of its own.
fn sub_algorithm(ctx: &StabilityContext, set: ComponentSet, degree: i64, out: &mut [i64]) -> Result<(), KodairaError> {
    let (y, map) = ctx.curve().restrict(set);
    let h: Vec<i64> = map.iter().map(|&i| ctx.hs()[i]).collect();
    let sub = make_context(&y, &h, degree)?;
    for (local, deg) in algorithm_degrees(&sub)?.into_iter().enumerate() {
        out[map[local]] = deg;
    }
    Ok(())
}

/// Multidegrees `base_i + eps_i` with `eps_i in {0,1}` on the listed indices
/// and `sum eps = need`.
fn eps_patterns(base: &[i64], free: &[usize], need: i64) -> Vec<Vec<i64>> {
    let r = free.len();
    (0u32..1 << r)
        .filter(|m| m.count_ones() as i64 == need)
        .map(|m| {
            let mut md = base.to_vec();
            for (j, &i) in free.iter().enumerate() {
                md[i] += (m >> j & 1) as i64;
            }
            md
        })
        .collect()
}

pub fn moduli_iii(ctx: &StabilityContext) -> Result<ModuliDescription, KodairaError> {
    require(ctx, FiberType::III, "III")?;
    let x = ctx.curve();
    let mut desc = ModuliDescription::empty(x, ctx.d(), KernelDims { additive: 1, multiplicative: 0 });
    let data: Vec<_> = (0..2).map(|i| singleton_data(ctx, i)).collect();
    let low: Vec<i64> = data.iter().map(|d| d.0).collect();
    if data[0].1 {
        desc.stable_strata.push(low.iter().map(|l| l + 1).collect());
        desc.semistable_strata.push(low);
    } else {
        desc.stable_strata.push(vec![low[0] + 1, low[1] + 2]);
        desc.stable_strata.push(vec![low[0] + 2, low[1] + 1]);
    }
    let t = transform_at(x, &x.points()[0].id, SplitMode::ToNode)?;
    let sub = make_context(&t.target, ctx.hs(), ctx.d() - t.genus_drop)?;
    let moduli = moduli_treelike(&sub)?;
    desc.boundary = Some(Box::new(Boundary { transform: t, moduli }));
    desc.normalize();
    Ok(desc)
}

pub fn moduli_iv(ctx: &StabilityContext) -> Result<ModuliDescription, KodairaError> {
    require(ctx, FiberType::IV, "IV")?;
    let x = ctx.curve();
    let mut desc = ModuliDescription::empty(x, ctx.d(), KernelDims { additive: 1, multiplicative: 0 });
    let data: Vec<_> = (0..3).map(|i| singleton_data(ctx, i)).collect();
    let base: Vec<i64> = data.iter().map(|d| d.0 + 1).collect();
    let free: Vec<usize> = (0..3).filter(|&i| !data[i].1).collect();
    let need = ctx.d() - base.iter().sum::<i64>();
    desc.stable_strata = eps_patterns(&base, &free, need);
    for i in (0..3).filter(|&i| data[i].1) {
        let mut md = vec![0; 3];
        md[i] = data[i].0;
        let rest = x.all().difference(ComponentSet::singleton(i));
        sub_algorithm(ctx, rest, ctx.d() - md[i] - 2, &mut md)?;
        desc.semistable_strata.push(md);
    }
    let t = transform_at(x, &x.points()[0].id, SplitMode::ToSpatial)?;
    let sub = make_context(&t.target, ctx.hs(), ctx.d() - t.genus_drop)?;
    let moduli = moduli_xprime(&sub)?;
    desc.boundary = Some(Box::new(Boundary { transform: t, moduli }));
    desc.normalize();
    Ok(desc)
}

pub fn moduli_xprime(ctx: &StabilityContext) -> Result<ModuliDescription, KodairaError> {
    require(ctx, FiberType::Xprime, "Xprime")?;
    let x = ctx.curve();
    let mut desc = ModuliDescription::empty(x, ctx.d(), KernelDims::default());
    let data: Vec<_> = (0..3).map(|i| singleton_data(ctx, i)).collect();
    let base: Vec<i64> = data.iter().map(|d| d.0 + 1).collect();
    if data.iter().all(|d| !d.1) && base.iter().sum::<i64>() == ctx.d() {
        desc.stable_strata.push(base);
    }
    for i in (0..3).filter(|&i| data[i].1) {
        let mut md = vec![0; 3];
        md[i] = data[i].0;
        let rest = x.all().difference(ComponentSet::singleton(i));
        sub_algorithm(ctx, rest, ctx.d() - md[i] - 1, &mut md)?;
        desc.semistable_strata.push(md);
    }
    desc.notes.push("picard product of the components".into());
    desc.notes.push("sheaves that are not line bundles are never stable and add no new classes".into());
    desc.normalize();
    Ok(desc)
}

pub fn moduli_in(ctx: &StabilityContext) -> Result<ModuliDescription, KodairaError> {
    require(ctx, FiberType::In(0), "I_N")?;
    let x = ctx.curve();
    let n = x.n();
    let mut desc = ModuliDescription::empty(x, ctx.d(), KernelDims { additive: 0, multiplicative: 1 });
    let data: Vec<_> = (0..n).map(|i| singleton_data(ctx, i)).collect();
    let base: Vec<i64> = data.iter().map(|d| d.0 + 1).collect();
    let free: Vec<usize> = (0..n).filter(|&i| !data[i].1).collect();
    let need = ctx.d() - base.iter().sum::<i64>();
    let fracs: Vec<_> = (0..n).map(|i| ctx.k_of(ComponentSet::singleton(i)).frac).collect();
    let one = num_rational::Rational64::from_integer(1);
    for md in eps_patterns(&base, &free, need) {
        let ok = ctx.bounds().iter().all(|bd| {
            let (mut eps, mut a) = (0, num_rational::Rational64::from_integer(0));
            for i in bd.sub.members.iter().filter(|i| free.contains(i)) {
                eps += md[i] - base[i];
                a += fracs[i];
            }
            let diff = num_rational::Rational64::from_integer(eps) - a;
            -one < diff && diff < one
        });
        if ok {
            desc.stable_strata.push(md);
        }
    }
    for bd in ctx.bounds() {
        let dset = bd.sub.members;
        if !ctx.k_of(dset).is_integer {
            continue;
        }
        let rest = x.all().difference(dset);
        let mut md = vec![0; n];
        sub_algorithm(ctx, dset, ctx.lower_of(dset).to_integer(), &mut md)?;
        sub_algorithm(ctx, rest, ctx.lower_of(rest).to_integer(), &mut md)?;
        desc.semistable_strata.push(md);
    }
    let last = x.points()[n - 1].id.clone();
    let t = transform_at(x, &last, SplitMode::Separate)?;
    let sub = make_context(&t.target, ctx.hs(), ctx.d() - t.genus_drop)?;
    let moduli = moduli_treelike(&sub)?;
    desc.boundary = Some(Box::new(Boundary { transform: t, moduli }));
    desc.normalize();
    Ok(desc)
}

/// Dispatches on the shape of the curve.
pub fn describe(ctx: &StabilityContext) -> Result<ModuliDescription, KodairaError> {
    match fiber_type(ctx.curve()) {
        Some(FiberType::III) => moduli_iii(ctx),
        Some(FiberType::IV) => moduli_iv(ctx),
        Some(FiberType::Xprime) => moduli_xprime(ctx),
        Some(FiberType::In(_)) => moduli_in(ctx),
        Some(FiberType::TreeLike) => Ok(moduli_treelike(ctx)?),
        None => Err(KodairaError::WrongCurve("III, IV, Xprime, I_N or tree-like")),
    }
}

fn degree_zero_curve(x: &CurveGraph) -> Result<FiberType, KodairaError> {
    let ft = fiber_type(x);
    let rational = x.components().iter().all(|c| c.chi == 1);
    match ft {
        Some(t @ (FiberType::III | FiberType::IV | FiberType::In(_))) if rational => Ok(t),
        _ => Err(KodairaError::WrongCurve("III, IV or I_N with rational components")),
    }
}

fn alternating_cyclic(md: &[i64]) -> bool {
    let nz: Vec<i64> = md.iter().copied().filter(|&v| v != 0).collect();
    md.iter().all(|v| v.abs() <= 1)
        && !nz.is_empty()
        && nz.len().is_multiple_of(2)
        && (0..nz.len()).all(|i| nz[i] != nz[(i + 1) % nz.len()])
}

/// Degree-zero verdict on III, IV or I_N, independent of the polarization.
pub fn degree_zero_classify(x: &CurveGraph, f: &SheafDatum) -> Result<Verdict, KodairaError> {
    let ft = degree_zero_curve(x)?;
    let md = &f.multidegree;
    if md.len() != x.n() {
        return Err(StabilityError::MultidegreeLength {
            expected: x.n(),
            got: md.len(),
        }
        .into());
    }
    let (y, s) = sheaf_target(x, f)?;
    let degree = md.iter().sum::<i64>() + s;
    if degree != 0 {
        return Err(KodairaError::NonzeroDegree(degree));
    }
    let all = x.all();
    // chi of the restriction to D, computed on the curve carrying the sheaf
    let chi_on = |d: ComponentSet| sum_on(md, d) + y.chi_of(d);
    let first = |pred: &dyn Fn(ComponentSet) -> bool| {
        let mut subs: Vec<ComponentSet> = all.proper_subsets().filter(|&d| pred(d)).collect();
        subs.sort();
        subs.first().map(|&d| x.subcurve(d))
    };
    let status = if f.is_free() {
        if md.iter().all(|&v| v == 0) {
            Status::Stable
        } else {
            let ss = match ft {
                FiberType::III => md[0].abs() == 1,
                FiberType::IV => {
                    let mut s = md.clone();
                    s.sort_unstable();
                    s == [-1, 0, 1]
                }
                _ => alternating_cyclic(md),
            };
            if ss {
                Status::StrictlySemistable
            } else {
                Status::Unstable
            }
        }
    } else if all.proper_subsets().all(|d| chi_on(d) >= 0) {
        Status::StrictlySemistable
    } else {
        Status::Unstable
    };
    let witness = match status {
        Status::Stable => None,
        Status::Unstable => first(&|d| chi_on(d) < 0),
        Status::StrictlySemistable => first(&|d| chi_on(d) == 0),
    };
    Ok(Verdict { status, witness })
}

/// Graded multidegree shared by every strictly semistable degree-zero sheaf.
pub fn graded_degree_zero(x: &CurveGraph) -> Result<JHGrading, KodairaError> {
    degree_zero_curve(x)?;
    Ok(JHGrading {
        degrees: vec![-1; x.n()],
        splits: x.n() as i64,
    })
}

/// A connected component of the moduli of semistable sheaves of polarized rank 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentLabel {
    /// Sheaves of rank 1 on every component.
    Jacobian { degree: i64 },
    /// Sheaves of rank `rank` supported on one component.
    Higher { component: String, rank: i64, degree: i64 },
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentLabel::Jacobian { degree } => write!(f, "Jac^{degree}(X)"),
            ComponentLabel::Higher { component, rank, degree } => write!(f, "Mbar^{degree}({component},{rank})"),
        }
    }
}

/// Components of the moduli space for two integral curves meeting at one node.
pub fn component_decomposition(x: &CurveGraph, h: &[i64], d: i64) -> Result<Vec<ComponentLabel>, KodairaError> {
    if x.n() != 2 || x.points().len() != 1 || x.points()[0].kind != PointKind::Node {
        return Err(KodairaError::WrongCurve("two components meeting at one node"));
    }
    make_context(x, h, d)?;
    let htot: i64 = h.iter().sum();
    let mut out = vec![ComponentLabel::Jacobian { degree: d }];
    for (i, c) in x.components().iter().enumerate() {
        if htot % h[i] == 0 {
            let r = htot / h[i];
            out.push(ComponentLabel::Higher {
                component: c.id.clone(),
                rank: r,
                degree: d + x.chi_total() - r * c.chi,
            });
        }
    }
    Ok(out)
}
