use jacmod::cli::run;

fn jacmod(args: &str) -> (i32, String, String) {
    let argv = std::iter::once("jacmod").chain(args.split_whitespace());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn describe_type_iii_with_boundary() {
    let (code, out, _) = jacmod("describe --preset III --h 1,1 --d 0 --verify");
    assert_eq!(code, 0);
    let want = "\
degree 0
kernel additive=1 multiplicative=0
stable-strata 1
stratum C1:0 C2:0
semistable-strata 1
stratum C1:-1 C2:-1
boundary point=P1 genus-drop=1 degree=-1
  degree -1
  kernel additive=0 multiplicative=0
  stable-strata 0
  semistable-strata 1
  stratum C1:-1 C2:-1
  note boundary-at P1 sides C1 | C2 degrees -1 | -1
  boundary none
compare pass
";
    assert_eq!(out, want);
}

#[test]
fn describe_is_deterministic() {
    let a = jacmod("describe --preset I_4 --h 1,2,1,3 --d 2 --verify");
    let b = jacmod("describe --preset I_4 --h 1,2,1,3 --d 2 --verify");
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    assert!(a.1.ends_with("compare pass\n"));
}

#[test]
fn check_verdicts() {
    assert_eq!(jacmod("check --preset I_2 --h 1,1 --d 1 --md 1,0").1, "verdict stable witness=-\n");
    assert_eq!(jacmod("check --preset chain --n 2 --h 1,1 --d 1 --md 1,0").1, "verdict ss witness=C1\n");
    assert_eq!(jacmod("check --preset chain --n 2 --h 1,1 --d 2 --md 2,0").1, "verdict unstable witness=C1\n");
    let (code, out, _) = jacmod("check --preset III --h 1,1 --d 0 --md 0,-1 --local P1=blown");
    assert_eq!((code, out.as_str()), (0, "verdict ss witness=C1\n"));
}

#[test]
fn jh_on_the_chain() {
    let (code, out, _) = jacmod("jh --preset chain --n 2 --h 1,1 --d 1 --md 1,0 --verify");
    assert_eq!(code, 0);
    assert_eq!(out, "gr C1:0 C2:0\nsplits 1\noracle agrees\n");
}

#[test]
fn jh_rejects_unstable_input() {
    let (code, out, err) = jacmod("jh --preset chain --n 2 --h 1,1 --d 2 --md 2,0");
    assert_eq!((code, out.as_str()), (1, ""));
    assert!(err.starts_with("error precondition "), "{err}");
}

#[test]
fn region_listing() {
    let (code, out, _) = jacmod("region --preset III --h 1,1 --d 0");
    assert_eq!(code, 0);
    let want = "\
window C1:-3..3 C2:-3..3
stable 1
md C1:0 C2:0
ss 2
md C1:-1 C2:1
md C1:1 C2:-1
graded 1
gr C1:-1 C2:-1
";
    assert_eq!(out, want);
}

#[test]
fn component_labels() {
    let (_, out, _) = jacmod("components --preset chain --n 2 --h 2,2 --d 0");
    assert_eq!(out, "component Jac^0(X)\ncomponent Mbar^-1(C1,2)\ncomponent Mbar^-1(C2,2)\n");
    let (_, out, _) = jacmod("components --preset chain --n 2 --h 2,3 --d 5");
    assert_eq!(out, "component Jac^5(X)\n");
}

#[test]
fn degree_zero_fast_path() {
    let (code, out, _) = jacmod("degree-zero --preset IV --md -1,0,1 --verify");
    assert_eq!(code, 0);
    assert_eq!(out, "verdict ss witness=C1\npolarizations agree\n");
}

#[test]
fn boundary_of_a_cycle() {
    let (code, out, _) = jacmod("boundary --preset I_3 --h 1,1,1 --d 0");
    assert_eq!(code, 0);
    assert!(out.starts_with("boundary point=P3 genus-drop=1 degree=-1\n  degree -1\n"), "{out}");
}

#[test]
fn export_round_trips_through_a_file() {
    let (_, text, _) = jacmod("export --preset IV");
    assert_eq!(
        text,
        "component C1 chi=1\ncomponent C2 chi=1\ncomponent C3 chi=1\npoint P1 kind=planar-triple incident=C1,C2,C3\n"
    );
    let path = std::env::temp_dir().join(format!("jacmod-cli-{}.txt", std::process::id()));
    std::fs::write(&path, &text).unwrap();
    let from_file = jacmod(&format!("describe --file {} --h 1,1,1 --d 0", path.display()));
    let from_preset = jacmod("describe --preset IV --h 1,1,1 --d 0");
    std::fs::remove_file(&path).unwrap();
    assert_eq!(from_file, from_preset);
}

#[test]
fn parse_errors_exit_two() {
    let (code, out, err) = jacmod("check --preset bogus --h 1 --d 0 --md 0");
    assert_eq!((code, out.as_str()), (2, ""));
    assert!(err.starts_with("error parse "), "{err}");
    assert_eq!(jacmod("check --preset III --h 1,1 --d 0 --md 0,0,0").0, 2);
    assert_eq!(jacmod("frobnicate").0, 2);
}
