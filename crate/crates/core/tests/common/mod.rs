#![allow(dead_code)]

use jacmod::curve::{kodaira_preset, CurveGraph, PresetKind};

/// All polarizations with `n` positive entries and total at most `max`.
pub fn polarizations(n: usize, max: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let still = (n - cur.len() - 1) as i64;
        for v in 1..=left - still {
            cur.push(v);
            rec(n, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max, &mut Vec::new(), &mut out);
    out
}

pub fn fibers(max_n: usize) -> Vec<(String, CurveGraph)> {
    let mut v = vec![
        ("III".to_string(), kodaira_preset(PresetKind::III, 2).unwrap()),
        ("IV".to_string(), kodaira_preset(PresetKind::IV, 3).unwrap()),
        ("Xprime".to_string(), kodaira_preset(PresetKind::Xprime, 3).unwrap()),
    ];
    for n in 2..=max_n {
        v.push((format!("I_{n}"), kodaira_preset(PresetKind::In, n).unwrap()));
    }
    v
}

use jacmod::curve::{Component, GluingPoint, PointKind};
use rand::RngExt;
use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random tree of `n` components joined at nodes, with the given chis.
pub fn random_tree(rng: &mut ChaCha8Rng, chis: &[i64]) -> CurveGraph {
    let n = chis.len();
    let comps = chis.iter().enumerate().map(|(i, &c)| Component::new(format!("C{}", i + 1), c)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let points = (1..n)
        .map(|i| {
            let (a, b) = (perm[i], perm[rng.random_range(0..i)]);
            GluingPoint {
                id: format!("P{i}"),
                kind: PointKind::Node,
                incident: vec![a.min(b), a.max(b)],
            }
        })
        .collect();
    CurveGraph::new(comps, points).unwrap()
}

/// A random composition of `total` into `n` positive parts.
pub fn random_polarization(rng: &mut ChaCha8Rng, n: usize, total: i64) -> Vec<i64> {
    let mut h = vec![1; n];
    for _ in 0..total - n as i64 {
        h[rng.random_range(0..n)] += 1;
    }
    h
}

/// Every multidegree in the window with the given total.
pub fn window_points(window: &[(i64, i64)], d: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(w: &[(i64, i64)], left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() + 1 == w.len() {
            let (lo, hi) = w[cur.len()];
            if (lo..=hi).contains(&left) {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for v in w[cur.len()].0..=w[cur.len()].1 {
            cur.push(v);
            rec(w, left - v, cur, out);
            cur.pop();
        }
    }
    rec(window, d, &mut cur, &mut out);
    out
}
