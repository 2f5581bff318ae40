// Acceptance run: one line per criterion, exit status 1 if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{polarizations, random_polarization, random_tree, rng, window_points};
use jacmod::curve::{kodaira_preset, CurveGraph, PresetKind};
use jacmod::kodaira::{component_decomposition, degree_zero_classify, describe, fiber_type, FiberType};
use jacmod::oracle::{brute_force_jh, brute_force_region, compare, default_window, line_bundle_status, Region};
use jacmod::stability::{classify_line_bundle, classify_sheaf, make_context, LocalType, SheafDatum, Status};
use jacmod::treelike::{
    admissible_order, canonical_degrees, jh_filtration, jh_split, jh_split_with, moduli_treelike, moduli_treelike_with,
};
use num_rational::Rational64;
use rand::RngExt;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn region(x: &CurveGraph, h: &[i64], d: i64, pad: i64) -> Region {
    brute_force_region(x, h, d, &default_window(x, h, d, pad)).unwrap()
}

fn star_example() -> Outcome {
    let x = kodaira_preset(PresetKind::Star, 4).unwrap();
    let h = [1, 1, 2, 4];
    let mut best = Duration::MAX;
    let mut result = None;
    for _ in 0..50 {
        let start = Instant::now();
        let ctx = make_context(&x, &h, 3).unwrap();
        let canon = canonical_degrees(&ctx, &admissible_order(&x).unwrap()).values;
        let g = jh_split(&ctx).unwrap().degrees;
        best = best.min(start.elapsed());
        result = Some((canon, g));
    }
    let (canon, g) = result.unwrap();
    ensure!(canon == [0, 0, 2, 1], "canonical degrees {canon:?}");
    ensure!(g == [0, 0, 1, 1], "jh_split {g:?}");
    ensure!(best < Duration::from_millis(1), "took {best:?}");
    let r = region(&x, &h, 3, 0);
    ensure!(r.stable.is_empty(), "oracle finds stable points");
    ensure!(r.graded_classes == BTreeSet::from([g]), "oracle graded {:?}", r.graded_classes);
    Ok(format!("{best:?}"))
}

fn prime_polarizations() -> Outcome {
    let mut r = rng(41);
    let (mut low, mut top) = (0, 0);
    for inst in 0..120 {
        let htot = [2i64, 3, 5, 7][r.random_range(0..4)];
        let n = r.random_range(2..=htot.min(6) as usize);
        let chis: Vec<i64> = (0..n).map(|_| r.random_range(-2..=1)).collect();
        let x = random_tree(&mut r, &chis);
        let h = random_polarization(&mut r, n, htot);
        let t = r.random_range(-2..=2);
        let b = if inst % 2 == 0 { htot - 1 } else { r.random_range(0..(htot - 1).max(1)) };
        let d = x.genus() + htot * t + b;
        let ctx = make_context(&x, &h, d).unwrap();
        let m = moduli_treelike(&ctx).unwrap();
        let oracle = region(&x, &h, d, 0);
        let tag = format!("h={h:?} d={d} curve:\n{}", x.to_text());
        if b < htot - 1 {
            low += 1;
            let dx = canonical_degrees(&ctx, &admissible_order(&x).unwrap()).values;
            ensure!(m.stable_strata == [dx.clone()] && m.semistable_strata.is_empty(), "strata {m:?} {tag}");
            ensure!(oracle.stable == BTreeSet::from([dx]), "oracle stable {:?} {tag}", oracle.stable);
            ensure!(oracle.strictly_semistable.is_empty(), "oracle ss nonempty {tag}");
        } else {
            top += 1;
            let want: Vec<i64> = (0..n).map(|i| h[i] * (t + 1) - chis[i]).collect();
            ensure!(m.stable_strata.is_empty(), "stable strata {:?} {tag}", m.stable_strata);
            ensure!(jh_split(&ctx).unwrap().degrees == want, "jh_split {tag}");
            ensure!(oracle.graded_classes == BTreeSet::from([want]), "oracle graded {tag}");
            ensure!(oracle.stable.is_empty(), "oracle stable nonempty {tag}");
        }
    }
    Ok(format!("{low} with b<h-1, {top} with b=h-1"))
}

fn smooth_trees() -> Outcome {
    let mut r = rng(42);
    for _ in 0..60 {
        let n = r.random_range(2..=6);
        let genera: Vec<i64> = (0..n).map(|_| r.random_range(0..=3)).collect();
        let chis: Vec<i64> = genera.iter().map(|g| 1 - g).collect();
        let x = random_tree(&mut r, &chis);
        let htot = r.random_range(n as i64..=9);
        let h = random_polarization(&mut r, n, htot);
        let d = x.genus() - 1;
        let ctx = make_context(&x, &h, d).unwrap();
        let want: Vec<i64> = genera.iter().map(|g| g - 1).collect();
        let m = moduli_treelike(&ctx).unwrap();
        ensure!(m.stable_strata.is_empty() && m.semistable_strata == [want.clone()], "h={h:?} {m:?}");
        let oracle = region(&x, &h, d, 0);
        ensure!(oracle.stable.is_empty() && oracle.graded_classes == BTreeSet::from([want]), "oracle h={h:?}");
    }
    Ok("60 trees".into())
}

fn degree_zero_fibers() -> Vec<(String, CurveGraph)> {
    common::fibers(6).into_iter().filter(|(n, _)| n != "Xprime").collect()
}

fn rule(ft: FiberType, md: &[i64]) -> bool {
    match ft {
        FiberType::III => md == [1, -1] || md == [-1, 1],
        FiberType::IV => {
            let mut s = md.to_vec();
            s.sort();
            s == [-1, 0, 1]
        }
        _ => {
            let nz: Vec<i64> = md.iter().copied().filter(|&v| v != 0).collect();
            md.iter().all(|v| (-1..=1).contains(v))
                && !nz.is_empty()
                && (0..nz.len()).all(|i| nz[i] == -nz[(i + 1) % nz.len()])
        }
    }
}

fn degree_zero() -> Outcome {
    let mut checked = 0;
    for (name, x) in degree_zero_fibers() {
        let ft = fiber_type(&x).unwrap();
        let window = vec![(-3, 3); x.n()];
        let mds = window_points(&window, 0);
        let want_ss: BTreeSet<Vec<i64>> = mds.iter().filter(|m| rule(ft, m)).cloned().collect();
        let mut first: Option<Region> = None;
        for h in polarizations(x.n(), 8) {
            let r = brute_force_region(&x, &h, 0, &window).unwrap();
            ensure!(r.stable == BTreeSet::from([vec![0; x.n()]]), "{name} h={h:?} stable {:?}", r.stable);
            ensure!(r.strictly_semistable == want_ss, "{name} h={h:?} ss differs");
            if let Some(f) = &first {
                ensure!(f.stable == r.stable && f.strictly_semistable == r.strictly_semistable, "{name} h={h:?}");
            } else {
                for md in &mds {
                    let fast = degree_zero_classify(&x, &SheafDatum::line_bundle(md.clone(), x.points().len())).unwrap();
                    let want = if r.stable.contains(md) {
                        Status::Stable
                    } else if r.strictly_semistable.contains(md) {
                        Status::StrictlySemistable
                    } else {
                        Status::Unstable
                    };
                    ensure!(fast.status == want, "{name} md={md:?} fast path {:?}", fast.status);
                }
                first = Some(r);
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} fiber/polarization pairs"))
}

fn graded_all_minus_one() -> Outcome {
    let mut count = 0;
    for (name, x) in degree_zero_fibers() {
        let ft = fiber_type(&x).unwrap();
        for h in polarizations(x.n(), 8) {
            for md in window_points(&vec![(-3, 3); x.n()], 0) {
                if line_bundle_status(&x, &h, &md).0 != Status::StrictlySemistable {
                    continue;
                }
                ensure!(rule(ft, &md), "{name} unexpected ss {md:?}");
                let g = brute_force_jh(&x, &h, &md).map_err(|e| e.to_string())?;
                ensure!(g == vec![-1; x.n()], "{name} h={h:?} md={md:?} graded {g:?}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} data"))
}

fn boundary_recursion() -> Outcome {
    let mut count = 0;
    for (name, x) in common::fibers(6) {
        let ft = fiber_type(&x).unwrap();
        let (expected, local) = match ft {
            FiberType::III => (kodaira_preset(PresetKind::Chain, 2).unwrap(), LocalType::Blown),
            FiberType::IV => (kodaira_preset(PresetKind::Xprime, 3).unwrap(), LocalType::Blown),
            FiberType::In(n) => (kodaira_preset(PresetKind::Chain, n).unwrap(), LocalType::Separated),
            _ => continue,
        };
        let max_h = if x.n() >= 5 { x.n() as i64 + 1 } else { 6 };
        for h in polarizations(x.n(), max_h) {
            for d in -4..=4 {
                let ctx = make_context(&x, &h, d).unwrap();
                let desc = describe(&ctx).unwrap();
                let b = desc.boundary.as_ref().ok_or(format!("{name} has no boundary"))?;
                ensure!(b.transform.target == expected, "{name} target\n{}", b.transform.target.to_text());
                ensure!(b.transform.genus_drop == 1, "{name} genus drop {}", b.transform.genus_drop);
                let direct = describe(&make_context(&expected, &h, d - 1).unwrap()).unwrap();
                ensure!(b.moduli == direct, "{name} h={h:?} d={d}:\n{}\nvs\n{direct}", b.moduli);
                let oracle = region(&expected, &h, d - 1, 0);
                let report = compare(&b.moduli, &oracle);
                ensure!(report.passed(), "{name} h={h:?} d={d}\n{report}");
                // the same sheaves seen on X with a non-free stalk
                let mut locals = vec![LocalType::Free; x.points().len()];
                *locals.last_mut().unwrap() = local;
                for md in window_points(&default_window(&expected, &h, d - 1, 1), d - 1) {
                    let f = SheafDatum { multidegree: md.clone(), local: locals.clone() };
                    let v = classify_sheaf(&ctx, &f).unwrap();
                    ensure!(v.status == line_bundle_status(&expected, &h, &md).0, "{name} h={h:?} d={d} md={md:?}");
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} cases"))
}

fn counterexamples() -> Outcome {
    let chain = kodaira_preset(PresetKind::Chain, 2).unwrap();
    let c1 = make_context(&chain, &[1, 1], 1).unwrap();
    let v = classify_line_bundle(&c1, &[1, 0]).unwrap().status;
    ensure!(v == Status::StrictlySemistable, "O(Q) on chain: {v}");
    let md2 = jacmod::stability::tensor_multidegree(&[1, 0], &[1, 0]).unwrap();
    let v = classify_line_bundle(&c1.with_degree(2), &md2).unwrap().status;
    ensure!(v == Status::Unstable, "tensor square: {v}");

    let i2 = kodaira_preset(PresetKind::In, 2).unwrap();
    let v = classify_line_bundle(&make_context(&i2, &[1, 1], 1).unwrap(), &[1, 0]).unwrap().status;
    ensure!(v == Status::Stable, "I_2 line bundle: {v}");
    let t = jacmod::transform_at(&i2, "P2", jacmod::SplitMode::Separate).unwrap();
    let pulled = jacmod::stability::pullback_multidegree(&t, &[1, 0]);
    let v = classify_line_bundle(&make_context(&t.target, &[1, 1], 1).unwrap(), &pulled).unwrap().status;
    ensure!(v != Status::Stable, "pullback: {v}");
    // the same phenomenon for other polarizations
    for h in polarizations(2, 7) {
        let htot = h[0] + h[1];
        for tt in -1..=1 {
            let d = htot * tt + htot - 1;
            let md = vec![h[0] * (tt + 1), h[1] * (tt + 1) - 1];
            let on_i2 = classify_line_bundle(&make_context(&i2, &h, d).unwrap(), &md).unwrap().status;
            let on_chain = classify_line_bundle(&make_context(&t.target, &h, d).unwrap(), &md).unwrap().status;
            ensure!(on_i2 == Status::Stable && on_chain != Status::Stable, "h={h:?} d={d}");
        }
    }
    Ok("exact verdicts".into())
}

fn component_labels() -> Outcome {
    let x = kodaira_preset(PresetKind::Chain, 2).unwrap();
    for d in -4..=4 {
        let cases: [(&[i64], Vec<String>); 4] = [
            (&[2, 3], vec![format!("Jac^{d}(X)")]),
            (&[2, 2], vec![format!("Jac^{d}(X)"), format!("Mbar^{}(C1,2)", d - 1), format!("Mbar^{}(C2,2)", d - 1)]),
            (&[2, 4], vec![format!("Jac^{d}(X)"), format!("Mbar^{}(C1,3)", d - 2)]),
            (&[1, 1], vec![format!("Jac^{d}(X)"), format!("Mbar^{}(C1,2)", d - 1), format!("Mbar^{}(C2,2)", d - 1)]),
        ];
        for (h, want) in cases {
            let got: Vec<String> = component_decomposition(&x, h, d).unwrap().iter().map(|l| l.to_string()).collect();
            ensure!(got == want, "h={h:?} d={d}: {got:?}");
        }
    }
    Ok("4 polarizations".into())
}

fn random_instance(r: &mut common::ChaCha8Rng) -> (CurveGraph, Vec<i64>, i64) {
    let n = r.random_range(2..=5);
    let chis: Vec<i64> = (0..n).map(|_| r.random_range(-1..=1)).collect();
    let x = random_tree(r, &chis);
    let htot = r.random_range(n as i64..=8);
    let h = random_polarization(r, n, htot);
    let d = r.random_range(-5..=5);
    (x, h, d)
}

fn properties() -> Outcome {
    let mut r = rng(43);
    let mut ss_checked = 0;
    for _ in 0..150 {
        let (x, h, d) = random_instance(&mut r);
        let ctx = make_context(&x, &h, d).unwrap();
        let all = x.all();
        let tag = format!("h={h:?} d={d}\n{}", x.to_text());

        // k is additive over complementary subcurves and sums to b+1
        for sub in all.proper_subsets() {
            let total = ctx.k_of(sub).value + ctx.k_of(all.difference(sub)).value;
            ensure!(total == Rational64::from_integer(ctx.b() + 1), "k-additivity {tag}");
        }

        let oracle = region(&x, &h, d, 0);
        let wide = region(&x, &h, d, 3);
        ensure!(
            oracle.stable == wide.stable && oracle.strictly_semistable == wide.strictly_semistable,
            "window sufficiency {tag}"
        );

        // integral k pins a semistable degree to an endpoint
        for md in oracle.stable.iter().chain(&oracle.strictly_semistable) {
            for bd in ctx.bounds() {
                if bd.lower.is_integer() && x.alpha(bd.sub.members) == 1 {
                    let dd = jacmod::stability::sum_on(md, bd.sub.members);
                    let at_end = dd == bd.lower.to_integer() || dd == bd.lower.to_integer() + 1;
                    ensure!(at_end, "endpoint forcing {md:?} {tag}");
                    ensure!(!oracle.stable.contains(md), "stable with integral k {md:?} {tag}");
                }
            }
        }

        let base = moduli_treelike(&ctx).unwrap();
        for _ in 0..4 {
            let mut rr = rng(r.random_range(0..u64::MAX));
            let mut choose = |leaves: &[usize]| leaves[rr.random_range(0..leaves.len())];
            let other = moduli_treelike_with(&ctx, &mut choose).unwrap();
            ensure!(
                other.stable_strata == base.stable_strata && other.semistable_strata == base.semistable_strata,
                "order invariance {tag}"
            );
            if !base.semistable_strata.is_empty() {
                ensure!(jh_split_with(&ctx, &mut choose).unwrap() == jh_split(&ctx).unwrap(), "jh order {tag}");
            }
        }

        for md in &oracle.strictly_semistable {
            let filt = jh_filtration(&ctx, md).map_err(|e| format!("{e} {md:?} {tag}"))?;
            let split = jh_split(&ctx).unwrap();
            let brute = brute_force_jh(&x, &h, md).unwrap();
            ensure!(filt == split && filt.degrees == brute, "jh agreement {md:?} {tag}");
            ss_checked += 1;
        }
    }
    ensure!(ss_checked > 0, "no strictly semistable samples");
    Ok(format!("150 instances, {ss_checked} strictly semistable multidegrees"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("star curve canonical and graded degrees", star_example),
        ("prime polarizations on random trees", prime_polarizations),
        ("degree g-1 on smooth-component trees", smooth_trees),
        ("degree-zero classification", degree_zero),
        ("degree-zero graded object", graded_all_minus_one),
        ("boundary recursion", boundary_recursion),
        ("tensor and pullback counterexamples", counterexamples),
        ("two-component moduli labels", component_labels),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(info) => println!("criterion {} {name}: PASS ({info})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL\n{why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
