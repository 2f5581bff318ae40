//! Brute-force reference computations.
//!
//! Nothing here consults the closed forms of the other modules. Stability is
//! decided by comparing reduced slopes `chi(E)/h_E` of the maximal subsheaf
//! supported on every proper subset of components, and Jordan-Hölder gradings
//! are found by exhaustive search over equal-slope subsheaves.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::curve::{ComponentSet, CurveGraph, GluingPoint, PointKind};
use crate::kodaira::ModuliDescription;
use crate::stability::Status;

/// Candidate cap used when `JACMOD_MAX_CANDIDATES` is unset.
pub const DEFAULT_MAX_CANDIDATES: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("window holds {count} candidates, cap is {cap}")]
    WindowTooLarge { count: u64, cap: u64 },
    #[error("input is {0}, not strictly semistable")]
    NotStrictlySemistable(Status),
    #[error("vector has {got} entries, curve has {expected} components")]
    Length { expected: usize, got: usize },
    #[error("Jordan-Hölder search reached different graded objects: {0}")]
    PathDependence(String),
    #[error("subcurve bookkeeping failed: {0}")]
    Bookkeeping(String),
}

pub fn max_candidates() -> u64 {
    std::env::var("JACMOD_MAX_CANDIDATES")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_CANDIDATES)
}

fn on(v: &[i64], set: ComponentSet) -> i64 {
    set.iter().map(|i| v[i]).sum()
}

/// Status of a line bundle with multidegree `md` on `curve` (which may be
/// disconnected). The witness is the support of the first subsheaf, in
/// bitmask order, that attains or beats the slope of the whole sheaf.
pub fn line_bundle_status(curve: &CurveGraph, h: &[i64], md: &[i64]) -> (Status, Option<ComponentSet>) {
    let all = curve.all();
    let chi_l = on(md, all) + curve.chi_total();
    let htot: i64 = h.iter().sum();
    let mut equal = None;
    for sub in all.proper_subsets() {
        let rest = all.difference(sub);
        let chi_sub = chi_l - (on(md, rest) + curve.chi_of(rest));
        let lhs = chi_sub as i128 * htot as i128;
        let rhs = chi_l as i128 * on(h, sub) as i128;
        if lhs > rhs {
            return (Status::Unstable, Some(sub));
        }
        if lhs == rhs && equal.is_none() {
            equal = Some(sub);
        }
    }
    match equal {
        Some(w) => (Status::StrictlySemistable, Some(w)),
        None => (Status::Stable, None),
    }
}

/// Per-component bounds every semistable multidegree satisfies, widened by `pad`.
pub fn default_window(curve: &CurveGraph, h: &[i64], d: i64, pad: i64) -> Vec<(i64, i64)> {
    let htot: i64 = h.iter().sum();
    let all = curve.all();
    let chi_l = d + curve.chi_total();
    (0..curve.n())
        .map(|i| {
            let me = ComponentSet::singleton(i);
            let rest = all.difference(me);
            // quotient on C_i: d_i + chi_i >= h_i chi_l / h
            let lo = Integer::div_ceil(&(h[i] * chi_l - curve.chi_of(me) * htot), &htot);
            // subsheaf on C_i: d_i + chi(O_X) - chi(rest) <= h_i chi_l / h
            let hi = Integer::div_floor(&(h[i] * chi_l + (curve.chi_of(rest) - curve.chi_total()) * htot), &htot);
            (lo - pad, hi + pad)
        })
        .collect()
}

/// Stable and strictly semistable multidegrees in a window.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    pub window: Vec<(i64, i64)>,
    pub stable: BTreeSet<Vec<i64>>,
    pub strictly_semistable: BTreeSet<Vec<i64>>,
    /// Graded multidegrees of the strictly semistable elements.
    pub graded_classes: BTreeSet<Vec<i64>>,
}

/// Number of multidegrees the enumeration visits for a window.
pub fn candidate_count(window: &[(i64, i64)]) -> u64 {
    if window.iter().any(|(lo, hi)| hi < lo) {
        return 0;
    }
    let free = window.len().saturating_sub(1);
    window[..free]
        .iter()
        .fold(1u64, |acc, (lo, hi)| acc.saturating_mul((hi - lo + 1) as u64))
}

pub fn brute_force_region(curve: &CurveGraph, h: &[i64], d: i64, window: &[(i64, i64)]) -> Result<Region, OracleError> {
    brute_force_region_capped(curve, h, d, window, max_candidates())
}

pub fn brute_force_region_capped(
    curve: &CurveGraph,
    h: &[i64],
    d: i64,
    window: &[(i64, i64)],
    cap: u64,
) -> Result<Region, OracleError> {
    let n = curve.n();
    for len in [h.len(), window.len()] {
        if len != n {
            return Err(OracleError::Length { expected: n, got: len });
        }
    }
    let count = candidate_count(window);
    if count > cap {
        return Err(OracleError::WindowTooLarge { count, cap });
    }
    let mut region = Region {
        window: window.to_vec(),
        ..Region::default()
    };
    if count == 0 {
        return Ok(region);
    }
    let mut md: Vec<i64> = window.iter().map(|w| w.0).collect();
    loop {
        let last = d - md[..n - 1].iter().sum::<i64>();
        if (window[n - 1].0..=window[n - 1].1).contains(&last) {
            md[n - 1] = last;
            match line_bundle_status(curve, h, &md).0 {
                Status::Stable => {
                    region.stable.insert(md.clone());
                }
                Status::StrictlySemistable => {
                    region.graded_classes.insert(brute_force_jh(curve, h, &md)?);
                    region.strictly_semistable.insert(md.clone());
                }
                Status::Unstable => {}
            }
        }
        // odometer over the first n-1 coordinates
        let mut i = 0;
        loop {
            if i + 1 >= n {
                return Ok(region);
            }
            if md[i] < window[i].1 {
                md[i] += 1;
                break;
            }
            md[i] = window[i].0;
            i += 1;
        }
    }
}

/// A line bundle on a connected, partially normalized subcurve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Piece {
    /// Original component index of each local component.
    comps: Vec<usize>,
    curve: CurveGraph,
    h: Vec<i64>,
    md: Vec<i64>,
}

impl Piece {
    fn chi(&self) -> i64 {
        self.md.iter().sum::<i64>() + self.curve.chi_total()
    }

    /// Splits a possibly disconnected piece into connected ones.
    fn split(self) -> Vec<Piece> {
        let pieces = self.curve.connected_pieces(self.curve.all());
        if pieces.len() == 1 {
            return vec![self];
        }
        pieces.into_iter().map(|p| self.sub(p, &[], &self.md)).collect()
    }

    /// Restriction to `set`, dropping the listed points, with degrees `md`.
    fn sub(&self, set: ComponentSet, drop_points: &[String], md: &[i64]) -> Piece {
        let (c, map) = self.curve.restrict(set);
        let c = if drop_points.is_empty() {
            c
        } else {
            let pts: Vec<GluingPoint> = c.points().iter().filter(|p| !drop_points.contains(&p.id)).cloned().collect();
            CurveGraph::new(c.components().to_vec(), pts).expect("dropping points keeps a valid curve")
        };
        Piece {
            comps: map.iter().map(|&i| self.comps[i]).collect(),
            h: map.iter().map(|&i| self.h[i]).collect(),
            md: map.iter().map(|&i| md[i]).collect(),
            curve: c,
        }
    }

    /// Maximal subsheaf supported on `sub`: restriction to `sub` twisted down
    /// along the branches meeting the complement.
    fn kernel(&self, sub: ComponentSet) -> Piece {
        let mut md = self.md.clone();
        let mut separated = Vec::new();
        for p in self.curve.points() {
            let inc = p.incident_set();
            let kern = inc.intersection(sub);
            let quot = inc.difference(sub);
            if kern.is_empty() || quot.is_empty() {
                continue;
            }
            let twist = match (p.kind, quot.len()) {
                (PointKind::Node, _) => 1,
                (PointKind::Tacnode, _) => 2,
                (PointKind::PlanarTriple, 1) => 1,
                (PointKind::PlanarTriple, _) => 2,
                (PointKind::SpatialTriple, 1) => {
                    separated.push(p.id.clone());
                    1
                }
                (PointKind::SpatialTriple, _) => 1,
            };
            for c in kern.iter() {
                md[c] -= twist;
            }
        }
        self.sub(sub, &separated, &md)
    }
}

type Graded = BTreeMap<usize, i64>;

struct JhSearch {
    memo: HashMap<Piece, Graded>,
}

impl JhSearch {
    fn graded(&mut self, piece: &Piece) -> Result<Graded, OracleError> {
        if let Some(g) = self.memo.get(piece) {
            return Ok(g.clone());
        }
        let all = piece.curve.all();
        let chi_l = piece.chi();
        let htot: i64 = piece.h.iter().sum();
        let mut found: Option<Graded> = None;
        for sub in all.proper_subsets() {
            let rest = all.difference(sub);
            let chi_sub = chi_l - (on(&piece.md, rest) + piece.curve.chi_of(rest));
            let lhs = chi_sub as i128 * htot as i128;
            let rhs = chi_l as i128 * on(&piece.h, sub) as i128;
            if lhs > rhs {
                return Err(OracleError::Bookkeeping(format!(
                    "piece on {:?} is unstable",
                    piece.comps
                )));
            }
            if lhs < rhs {
                continue;
            }
            let kernel = piece.kernel(sub);
            if kernel.chi() != chi_sub {
                return Err(OracleError::Bookkeeping(format!(
                    "kernel chi {} differs from {}",
                    kernel.chi(),
                    chi_sub
                )));
            }
            let quotient = piece.sub(rest, &[], &piece.md);
            let mut g = Graded::new();
            for part in kernel.split().into_iter().chain(quotient.split()) {
                g.extend(self.graded(&part)?);
            }
            match &found {
                None => found = Some(g),
                Some(prev) if *prev == g => {}
                Some(prev) => {
                    return Err(OracleError::PathDependence(format!("{prev:?} vs {g:?}")));
                }
            }
        }
        let g = found.unwrap_or_else(|| piece.comps.iter().copied().zip(piece.md.iter().copied()).collect());
        self.memo.insert(piece.clone(), g.clone());
        Ok(g)
    }
}

/// Graded multidegree of a strictly semistable line bundle, found by
/// exploring every equal-slope subsheaf and checking all paths agree.
pub fn brute_force_jh(curve: &CurveGraph, h: &[i64], md: &[i64]) -> Result<Vec<i64>, OracleError> {
    let n = curve.n();
    for len in [h.len(), md.len()] {
        if len != n {
            return Err(OracleError::Length { expected: n, got: len });
        }
    }
    let (status, _) = line_bundle_status(curve, h, md);
    if status != Status::StrictlySemistable {
        return Err(OracleError::NotStrictlySemistable(status));
    }
    let mut search = JhSearch { memo: HashMap::new() };
    let mut out = vec![0; n];
    let whole = Piece {
        comps: (0..n).collect(),
        curve: curve.clone(),
        h: h.to_vec(),
        md: md.to_vec(),
    };
    let mut total = Graded::new();
    for part in whole.split() {
        total.extend(search.graded(&part)?);
    }
    for (c, deg) in total {
        out[c] = deg;
    }
    Ok(out)
}

/// Differences between a moduli description and an oracle region.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompareReport {
    pub missing_stable: Vec<Vec<i64>>,
    pub extra_stable: Vec<Vec<i64>>,
    pub missing_graded: Vec<Vec<i64>>,
    pub extra_graded: Vec<Vec<i64>>,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.missing_stable.is_empty()
            && self.extra_stable.is_empty()
            && self.missing_graded.is_empty()
            && self.extra_graded.is_empty()
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return writeln!(f, "compare pass");
        }
        let rows = [
            ("stable-only-in-description", &self.extra_stable),
            ("stable-only-in-oracle", &self.missing_stable),
            ("graded-only-in-description", &self.extra_graded),
            ("graded-only-in-oracle", &self.missing_graded),
        ];
        for (label, list) in rows {
            for md in list {
                let s: Vec<String> = md.iter().map(i64::to_string).collect();
                writeln!(f, "mismatch {label} {}", s.join(","))?;
            }
        }
        writeln!(f, "compare fail")
    }
}

/// Stable strata against `region.stable`, strictly semistable strata against
/// `region.graded_classes`.
pub fn compare(description: &ModuliDescription, region: &Region) -> CompareReport {
    let ds: BTreeSet<Vec<i64>> = description.stable_strata.iter().cloned().collect();
    let dg: BTreeSet<Vec<i64>> = description.semistable_strata.iter().cloned().collect();
    CompareReport {
        extra_stable: ds.difference(&region.stable).cloned().collect(),
        missing_stable: region.stable.difference(&ds).cloned().collect(),
        extra_graded: dg.difference(&region.graded_classes).cloned().collect(),
        missing_graded: region.graded_classes.difference(&dg).cloned().collect(),
    }
}
