//! Tree-like curves: admissible orders, canonical degrees and the recursive
//! splitting that produces Jordan-Hölder graded multidegrees.

use thiserror::Error;

use crate::curve::{ComponentSet, CurveGraph};
use crate::kodaira::{KernelDims, ModuliDescription};
use crate::stability::{classify_line_bundle, sum_on, StabilityContext, StabilityError, Status};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("curve is not tree-like")]
    NotTreeLike,
    #[error("no strictly semistable locus: every branch has non-integral k")]
    NoStrictlySemistable,
    #[error("multidegree is {0}, not strictly semistable")]
    NotStrictlySemistable(Status),
    #[error(transparent)]
    Stability(#[from] StabilityError),
}

/// Picks one of the current leaves (given in ascending index order).
pub type LeafChooser<'a> = dyn FnMut(&[usize]) -> usize + 'a;

pub fn lowest_leaf(leaves: &[usize]) -> usize {
    leaves[0]
}

/// An ordering `C_1, ..., C_m` of the components of a tree-like subcurve such
/// that every tail `C_{i+1} ∪ ... ∪ C_m` is connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleOrder {
    pub members: ComponentSet,
    pub order: Vec<usize>,
    /// `X_i` for `i < m`: the side of `P_i` that contains `C_i`.
    pub branches: Vec<ComponentSet>,
    /// Index (into the curve's point list) of the node `P_i`.
    pub attach_points: Vec<usize>,
}

impl AdmissibleOrder {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

struct Edge {
    a: usize,
    b: usize,
    point: usize,
}

fn edges_in(x: &CurveGraph, set: ComponentSet) -> Vec<Edge> {
    x.points()
        .iter()
        .enumerate()
        .filter_map(|(k, p)| {
            let inside: Vec<usize> = p.incident.iter().copied().filter(|&c| set.contains(c)).collect();
            (inside.len() == 2).then(|| Edge {
                a: inside[0],
                b: inside[1],
                point: k,
            })
        })
        .collect()
}

fn side(edges: &[Edge], set: ComponentSet, start: usize, cut: usize) -> ComponentSet {
    let mut seen = ComponentSet::singleton(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for e in edges.iter().filter(|e| e.point != cut) {
            let w = if e.a == v {
                e.b
            } else if e.b == v {
                e.a
            } else {
                continue;
            };
            if set.contains(w) && !seen.contains(w) {
                seen.insert(w);
                stack.push(w);
            }
        }
    }
    seen
}

pub fn admissible_order(x: &CurveGraph) -> Result<AdmissibleOrder, TreeError> {
    admissible_order_on(x, x.all(), &mut lowest_leaf)
}

/// Admissible order of the subcurve `set`, removing leaves in the order
/// picked by `choose`.
pub fn admissible_order_on(x: &CurveGraph, set: ComponentSet, choose: &mut LeafChooser) -> Result<AdmissibleOrder, TreeError> {
    if !x.is_tree_like_on(set) {
        return Err(TreeError::NotTreeLike);
    }
    let edges = edges_in(x, set);
    let mut remaining = set;
    let mut ord = AdmissibleOrder {
        members: set,
        order: Vec::with_capacity(set.len()),
        branches: Vec::new(),
        attach_points: Vec::new(),
    };
    while remaining.len() > 1 {
        let leaves: Vec<usize> = remaining
            .iter()
            .filter(|&c| {
                edges
                    .iter()
                    .filter(|e| (e.a == c || e.b == c) && remaining.contains(e.a) && remaining.contains(e.b))
                    .count()
                    == 1
            })
            .collect();
        let c = choose(&leaves);
        assert!(leaves.contains(&c), "chooser must return a leaf");
        let e = edges
            .iter()
            .find(|e| (e.a == c || e.b == c) && remaining.contains(e.a) && remaining.contains(e.b))
            .expect("leaf has an edge");
        ord.order.push(c);
        ord.branches.push(side(&edges, set, c, e.point));
        ord.attach_points.push(e.point);
        remaining = remaining.difference(ComponentSet::singleton(c));
    }
    ord.order.push(remaining.first().expect("nonempty tree"));
    Ok(ord)
}

/// Degrees `d_i^X`, indexed by component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalDegrees {
    pub values: Vec<i64>,
}

fn canonical_on(ctx: &StabilityContext, ord: &AdmissibleOrder, budget: i64, out: &mut [i64]) {
    let x = ctx.curve();
    let mut used = 0;
    for (i, &c) in ord.order.iter().enumerate() {
        let v = match ord.branches.get(i) {
            Some(&xi) => {
                let k = ctx.k_of(xi);
                let earlier: i64 = ord.order[..i].iter().filter(|&&j| xi.contains(j)).map(|&j| out[j]).sum();
                -x.chi_of(xi) + ctx.h_of(xi) * ctx.t() + k.floor + 1 - earlier
            }
            None => budget - used,
        };
        out[c] = v;
        used += v;
    }
}

pub fn canonical_degrees(ctx: &StabilityContext, ord: &AdmissibleOrder) -> CanonicalDegrees {
    let mut values = vec![0; ctx.curve().n()];
    canonical_on(ctx, ord, ctx.d(), &mut values);
    CanonicalDegrees { values }
}

/// A subcurve is final when it is irreducible or no branch of its order has
/// an integral `k` (computed with the global `h` and `b`).
pub fn is_final(ctx: &StabilityContext, ord: &AdmissibleOrder) -> bool {
    ord.branches.iter().all(|&b| !ctx.k_of(b).is_integer)
}

/// Graded multidegree of a Jordan-Hölder graded object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JHGrading {
    /// Degree of the piece on each component, indexed by component.
    pub degrees: Vec<i64>,
    /// `d` minus the total graded degree.
    pub splits: i64,
}

impl JHGrading {
    pub fn pieces(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.degrees.iter().copied().enumerate()
    }
}

fn split_rec(ctx: &StabilityContext, set: ComponentSet, budget: i64, choose: &mut LeafChooser, out: &mut [i64], splits: &mut i64) -> Result<(), TreeError> {
    let x = ctx.curve();
    let ord = admissible_order_on(x, set, choose)?;
    let first_integral = ord.branches.iter().copied().find(|&b| ctx.k_of(b).is_integer);
    match first_integral {
        None if ord.len() == 1 => {
            let c = ord.order[0];
            let s = ComponentSet::singleton(c);
            out[c] = ctx.h_of(s) * ctx.t() + ctx.k_of(s).floor - x.chi_of(s);
        }
        None => canonical_on(ctx, &ord, budget, out),
        Some(y) => {
            let k = ctx.k_of(y);
            let by = -x.chi_of(y) + ctx.h_of(y) * ctx.t() + k.floor;
            *splits += 1;
            split_rec(ctx, y, by, choose, out, splits)?;
            split_rec(ctx, set.difference(y), budget - by - 1, choose, out, splits)?;
        }
    }
    Ok(())
}

/// Graded multidegree of the strictly semistable locus, by recursive splitting.
pub fn jh_split(ctx: &StabilityContext) -> Result<JHGrading, TreeError> {
    jh_split_with(ctx, &mut lowest_leaf)
}

pub fn jh_split_with(ctx: &StabilityContext, choose: &mut LeafChooser) -> Result<JHGrading, TreeError> {
    let x = ctx.curve();
    let ord = admissible_order_on(x, x.all(), choose)?;
    if is_final(ctx, &ord) {
        return Err(TreeError::NoStrictlySemistable);
    }
    let mut degrees = vec![0; x.n()];
    let mut splits = 0;
    split_rec(ctx, x.all(), ctx.d(), choose, &mut degrees, &mut splits)?;
    let total: i64 = degrees.iter().sum();
    debug_assert_eq!(total, ctx.d() - splits);
    Ok(JHGrading {
        splits: ctx.d() - total,
        degrees,
    })
}

fn filtration_rec(ctx: &StabilityContext, set: ComponentSet, md: &mut Vec<i64>, out: &mut [i64]) -> Result<(), TreeError> {
    let x = ctx.curve();
    let ord = admissible_order_on(x, set, &mut lowest_leaf)?;
    for (r, &b) in ord.branches.iter().enumerate() {
        if !ctx.k_of(b).is_integer {
            continue;
        }
        let lower = ctx.lower_of(b).to_integer();
        let db = sum_on(md, b);
        if db != lower && db != lower + 1 {
            continue;
        }
        let rest = set.difference(b);
        let p = &x.points()[ord.attach_points[r]];
        let in_b = p.incident.iter().copied().find(|&c| b.contains(c)).expect("node meets branch");
        let in_rest = p.incident.iter().copied().find(|&c| rest.contains(c)).expect("node meets tail");
        if db == lower {
            // quotient on the branch, kernel on the tail
            md[in_rest] -= 1;
        } else {
            // subsheaf on the branch, quotient on the tail
            md[in_b] -= 1;
        }
        filtration_rec(ctx, b, md, out)?;
        filtration_rec(ctx, rest, md, out)?;
        return Ok(());
    }
    for c in set.iter() {
        out[c] = md[c];
    }
    Ok(())
}

/// Graded multidegree of a given strictly semistable line bundle, following
/// at each step the interval endpoint its multidegree actually attains.
pub fn jh_filtration(ctx: &StabilityContext, md: &[i64]) -> Result<JHGrading, TreeError> {
    if !ctx.curve().is_tree_like() {
        return Err(TreeError::NotTreeLike);
    }
    let v = classify_line_bundle(ctx, md)?;
    if v.status != Status::StrictlySemistable {
        return Err(TreeError::NotStrictlySemistable(v.status));
    }
    let mut work = md.to_vec();
    let mut degrees = vec![0; md.len()];
    filtration_rec(ctx, ctx.curve().all(), &mut work, &mut degrees)?;
    Ok(JHGrading {
        splits: ctx.d() - degrees.iter().sum::<i64>(),
        degrees,
    })
}

/// Canonical degrees when no branch has integral `k`, otherwise the graded
/// multidegree from [`jh_split`].
pub fn algorithm_degrees(ctx: &StabilityContext) -> Result<Vec<i64>, TreeError> {
    let ord = admissible_order(ctx.curve())?;
    if is_final(ctx, &ord) {
        Ok(canonical_degrees(ctx, &ord).values)
    } else {
        Ok(jh_split(ctx)?.degrees)
    }
}

pub fn moduli_treelike(ctx: &StabilityContext) -> Result<ModuliDescription, TreeError> {
    moduli_treelike_with(ctx, &mut lowest_leaf)
}

pub fn moduli_treelike_with(ctx: &StabilityContext, choose: &mut LeafChooser) -> Result<ModuliDescription, TreeError> {
    let x = ctx.curve();
    let ord = admissible_order_on(x, x.all(), choose)?;
    let mut desc = ModuliDescription::empty(x, ctx.d(), KernelDims::default());
    if is_final(ctx, &ord) {
        desc.stable_strata.push(canonical_degrees(ctx, &ord).values);
    } else {
        desc.semistable_strata.push(jh_split_with(ctx, choose)?.degrees);
    }
    // Sheaves that are not free at a node P_i are direct sums; they are
    // semistable exactly when both sides sit at their lower endpoints.
    for (r, &b) in ord.branches.iter().enumerate() {
        if !ctx.k_of(b).is_integer {
            continue;
        }
        let rest = x.all().difference(b);
        desc.notes.push(format!(
            "boundary-at {} sides {} | {} degrees {} | {}",
            x.points()[ord.attach_points[r]].id,
            x.set_ids(b),
            x.set_ids(rest),
            ctx.lower_of(b).to_integer(),
            ctx.lower_of(rest).to_integer()
        ));
    }
    desc.normalize();
    Ok(desc)
}
