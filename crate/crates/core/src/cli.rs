//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};

use crate::curve::{build_curve, kodaira_preset, parse_preset_name, CurveGraph};
use crate::kodaira::{component_decomposition, degree_zero_classify, describe, ModuliDescription};
use crate::oracle::{self, brute_force_jh, brute_force_region, compare, default_window, line_bundle_status};
use crate::stability::{classify_sheaf, make_context, sheaf_target, LocalType, SheafDatum, StabilityContext, Verdict};
use crate::treelike::jh_filtration;

#[derive(Debug, Parser)]
#[command(name = "jacmod", version, about = "Stability and moduli of rank-1 sheaves on reducible curves")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Moduli description: stable strata, semistable classes, kernel, boundary.
    Describe(Common),
    /// Verdict for one sheaf.
    Check(Common),
    /// Graded multidegree of a strictly semistable line bundle.
    Jh(Common),
    /// Brute-force stable and strictly semistable multidegrees in a window.
    Region(Common),
    /// Description of the locus of sheaves that are not line bundles.
    Boundary(Common),
    /// Connected components of the moduli space (two curves meeting at a node).
    Components(Common),
    /// Polarization-free verdict in degree zero.
    DegreeZero(Common),
    /// Print the curve in the text file format.
    Export(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Preset curve: I_N, I_<n>, III, IV, Xprime, chain, star.
    #[arg(long)]
    preset: Option<String>,
    /// Component count for presets that need one.
    #[arg(long)]
    n: Option<usize>,
    /// Curve file.
    #[arg(long)]
    file: Option<std::path::PathBuf>,
    /// Polarization degrees, comma separated, in component order.
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    /// Total degree.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<i64>,
    /// Multidegree, comma separated, in component order.
    #[arg(long, allow_hyphen_values = true)]
    md: Option<String>,
    /// Stalk types, e.g. `P1=blown,P2=pair:C1+C2`; unlisted points are free.
    #[arg(long)]
    local: Option<String>,
    /// Window `lo:hi` applied to every component.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Cross-check against the brute-force oracle.
    #[arg(long)]
    verify: bool,
}

struct Failure {
    code: i32,
    kind: &'static str,
    msg: String,
}

fn parse_err(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        kind: "parse",
        msg: msg.into(),
    }
}

fn pre_err(msg: impl ToString) -> Failure {
    Failure {
        code: 1,
        kind: "precondition",
        msg: msg.to_string(),
    }
}

fn mismatch(msg: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        kind: "mismatch",
        msg: msg.into(),
    }
}

fn int_list(s: &str, what: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|v| v.trim().parse::<i64>().map_err(|e| parse_err(format!("{what}: `{v}`: {e}"))))
        .collect()
}

impl Common {
    fn curve(&self) -> Result<CurveGraph, Failure> {
        match (&self.preset, &self.file) {
            (Some(_), Some(_)) => Err(parse_err("give either --preset or --file, not both")),
            (None, None) => Err(parse_err("missing curve: use --preset or --file")),
            (Some(p), None) => {
                let (kind, implied) = parse_preset_name(p).map_err(|e| parse_err(e.to_string()))?;
                let n = self
                    .n
                    .or(implied)
                    .ok_or_else(|| parse_err(format!("preset {p} needs --n")))?;
                kodaira_preset(kind, n).map_err(pre_err)
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
                build_curve(&text).map_err(|e| match e {
                    crate::curve::CurveError::Disconnected => pre_err(e),
                    other => parse_err(other.to_string()),
                })
            }
        }
    }

    fn h(&self, x: &CurveGraph) -> Result<Vec<i64>, Failure> {
        let h = int_list(self.h.as_deref().ok_or_else(|| parse_err("missing --h"))?, "--h")?;
        if h.len() != x.n() {
            return Err(parse_err(format!("--h has {} entries, curve has {} components", h.len(), x.n())));
        }
        Ok(h)
    }

    fn d(&self) -> Result<i64, Failure> {
        self.d.ok_or_else(|| parse_err("missing --d"))
    }

    fn md(&self, x: &CurveGraph) -> Result<Vec<i64>, Failure> {
        let md = int_list(self.md.as_deref().ok_or_else(|| parse_err("missing --md"))?, "--md")?;
        if md.len() != x.n() {
            return Err(parse_err(format!("--md has {} entries, curve has {} components", md.len(), x.n())));
        }
        Ok(md)
    }

    fn ctx(&self, x: &CurveGraph) -> Result<StabilityContext, Failure> {
        make_context(x, &self.h(x)?, self.d()?).map_err(pre_err)
    }

    fn sheaf(&self, x: &CurveGraph) -> Result<SheafDatum, Failure> {
        let mut local = vec![LocalType::Free; x.points().len()];
        if let Some(spec) = &self.local {
            for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
                let (pid, ty) = item
                    .split_once('=')
                    .ok_or_else(|| parse_err(format!("--local entry `{item}` needs `point=type`")))?;
                let k = x
                    .point_index(pid.trim())
                    .ok_or_else(|| parse_err(format!("unknown point `{pid}`")))?;
                local[k] = match ty.trim() {
                    "free" => LocalType::Free,
                    "separated" => LocalType::Separated,
                    "blown" => LocalType::Blown,
                    other => {
                        let pair = other
                            .strip_prefix("pair:")
                            .ok_or_else(|| parse_err(format!("unknown local type `{other}`")))?;
                        let (a, b) = pair
                            .split_once('+')
                            .ok_or_else(|| parse_err(format!("pair `{pair}` needs `A+B`")))?;
                        let idx = |c: &str| x.index_of(c.trim()).ok_or_else(|| parse_err(format!("unknown component `{c}`")));
                        LocalType::Pair(idx(a)?, idx(b)?)
                    }
                };
            }
        }
        Ok(SheafDatum {
            multidegree: self.md(x)?,
            local,
        })
    }

    fn window(&self, x: &CurveGraph, h: &[i64], d: i64) -> Result<Vec<(i64, i64)>, Failure> {
        match &self.window {
            None => Ok(default_window(x, h, d, 2)),
            Some(w) => {
                let (lo, hi) = w
                    .split_once(':')
                    .ok_or_else(|| parse_err(format!("--window `{w}` needs `lo:hi`")))?;
                let lo = lo.trim().parse::<i64>().map_err(|e| parse_err(format!("--window: {e}")))?;
                let hi = hi.trim().parse::<i64>().map_err(|e| parse_err(format!("--window: {e}")))?;
                Ok(vec![(lo, hi); x.n()])
            }
        }
    }
}

fn degrees_line(prefix: &str, x: &CurveGraph, md: &[i64]) -> String {
    let parts: Vec<String> = x.components().iter().zip(md).map(|(c, d)| format!("{}:{d}", c.id)).collect();
    format!("{prefix} {}", parts.join(" "))
}

fn verdict_line(x: &CurveGraph, v: &Verdict) -> String {
    let w = match v.witness {
        Some(s) => x.set_ids(s.members),
        None => "-".to_string(),
    };
    format!("verdict {} witness={w}", v.status)
}

fn region(x: &CurveGraph, h: &[i64], d: i64, window: &[(i64, i64)]) -> Result<oracle::Region, Failure> {
    brute_force_region(x, h, d, window).map_err(|e| Failure {
        code: 1,
        kind: "oracle",
        msg: e.to_string(),
    })
}

fn run_verb(verb: &Verb, out: &mut String) -> Result<(), Failure> {
    use std::fmt::Write as _;
    match verb {
        Verb::Describe(c) | Verb::Boundary(c) => {
            let x = c.curve()?;
            let ctx = c.ctx(&x)?;
            let desc = describe(&ctx).map_err(pre_err)?;
            if let Verb::Boundary(_) = verb {
                write_boundary(out, &desc);
            } else {
                out.push_str(&desc.to_string());
            }
            if c.verify {
                let w = c.window(&x, ctx.hs(), ctx.d())?;
                let r = region(&x, ctx.hs(), ctx.d(), &w)?;
                let report = compare(&desc, &r);
                out.push_str(&report.to_string());
                if !report.passed() {
                    return Err(mismatch("description differs from oracle region"));
                }
            }
        }
        Verb::Check(c) => {
            let x = c.curve()?;
            let ctx = c.ctx(&x)?;
            let f = c.sheaf(&x)?;
            let v = classify_sheaf(&ctx, &f).map_err(pre_err)?;
            let _ = writeln!(out, "{}", verdict_line(&x, &v));
            if c.verify {
                let (y, _) = sheaf_target(&x, &f).map_err(pre_err)?;
                let (status, _) = line_bundle_status(&y, ctx.hs(), &f.multidegree);
                let _ = writeln!(out, "oracle {status}");
                if status != v.status {
                    return Err(mismatch(format!("oracle says {status}")));
                }
            }
        }
        Verb::Jh(c) => {
            let x = c.curve()?;
            let ctx = c.ctx(&x)?;
            let md = c.md(&x)?;
            let degrees = if x.is_tree_like() {
                jh_filtration(&ctx, &md).map_err(pre_err)?.degrees
            } else {
                brute_force_jh(&x, ctx.hs(), &md).map_err(pre_err)?
            };
            let _ = writeln!(out, "{}", degrees_line("gr", &x, &degrees));
            let _ = writeln!(out, "splits {}", ctx.d() - degrees.iter().sum::<i64>());
            if c.verify {
                let o = brute_force_jh(&x, ctx.hs(), &md).map_err(pre_err)?;
                if o != degrees {
                    return Err(mismatch(degrees_line("oracle-gr", &x, &o)));
                }
                let _ = writeln!(out, "oracle agrees");
            }
        }
        Verb::Region(c) => {
            let x = c.curve()?;
            let h = c.h(&x)?;
            let d = c.d()?;
            let w = c.window(&x, &h, d)?;
            make_context(&x, &h, d).map_err(pre_err)?;
            let r = region(&x, &h, d, &w)?;
            let win: Vec<String> = x.components().iter().zip(&w).map(|(c, (lo, hi))| format!("{}:{lo}..{hi}", c.id)).collect();
            let _ = writeln!(out, "window {}", win.join(" "));
            let _ = writeln!(out, "stable {}", r.stable.len());
            for md in &r.stable {
                let _ = writeln!(out, "{}", degrees_line("md", &x, md));
            }
            let _ = writeln!(out, "ss {}", r.strictly_semistable.len());
            for md in &r.strictly_semistable {
                let _ = writeln!(out, "{}", degrees_line("md", &x, md));
            }
            let _ = writeln!(out, "graded {}", r.graded_classes.len());
            for md in &r.graded_classes {
                let _ = writeln!(out, "{}", degrees_line("gr", &x, md));
            }
        }
        Verb::Components(c) => {
            let x = c.curve()?;
            let labels = component_decomposition(&x, &c.h(&x)?, c.d()?).map_err(pre_err)?;
            for l in labels {
                let _ = writeln!(out, "component {l}");
            }
        }
        Verb::DegreeZero(c) => {
            let x = c.curve()?;
            let f = c.sheaf(&x)?;
            let v = degree_zero_classify(&x, &f).map_err(pre_err)?;
            let _ = writeln!(out, "{}", verdict_line(&x, &v));
            if c.verify {
                // every polarization with entries up to 3 must agree
                let n = x.n() as u32;
                for code in 0..3u32.pow(n) {
                    let h: Vec<i64> = (0..n).map(|i| (code / 3u32.pow(i) % 3 + 1) as i64).collect();
                    let ctx = make_context(&x, &h, 0).map_err(pre_err)?;
                    let w = classify_sheaf(&ctx, &f).map_err(pre_err)?;
                    if w.status != v.status {
                        return Err(mismatch(format!("polarization {h:?} gives {}", w.status)));
                    }
                }
                let _ = writeln!(out, "polarizations agree");
            }
        }
        Verb::Export(c) => {
            let x = c.curve()?;
            out.push_str(&x.to_text());
        }
    }
    Ok(())
}

fn write_boundary(out: &mut String, desc: &ModuliDescription) {
    let text = desc.to_string();
    let mut on = false;
    for line in text.lines() {
        if line.starts_with("boundary ") {
            on = true;
        }
        if on {
            out.push_str(line);
            out.push('\n');
        }
    }
    for n in &desc.notes {
        if n.starts_with("boundary-at") {
            out.push_str(&format!("note {n}\n"));
        }
    }
}

/// Runs the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let _ = writeln!(err, "error parse {first}");
            return 2;
        }
    };
    let mut buf = String::new();
    let res = run_verb(&cli.verb, &mut buf);
    let _ = out.write_all(buf.as_bytes());
    match res {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error {} {}", f.kind, f.msg);
            f.code
        }
    }
}
