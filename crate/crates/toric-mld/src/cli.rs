//! Command-line front end: pair files in, reports out.
//!
//! Exit codes: 0 success, 1 verification violations, 2 parse or usage
//! errors, 3 validation errors in otherwise well-formed input (not a fan,
//! not R-Cartier, coefficient out of range).

use std::fmt::Write as _;
use std::io::Write;

use num_traits::Zero;

use crate::error::Error;
use crate::fan::Subdivision;
use crate::files::{self, PairFile};
use crate::lattice::Rational;
use crate::logpair::ToricLogPair;
use crate::verify::{
    check_bound, check_lsc, check_nonsingularity_criterion, check_product, check_resolution_oracle,
    gen_pairs, product_pair, CoefficientMode, GenConfig, PropertyResult,
};

const USAGE: &str = "\
usage: toric-mld <command> [options]

commands:
  mld <file> [--cone ID] [--json]      per-cone mld values and witnesses
  spectrum <file> [--json]             the finite set of closed-point mlds
  stratify <file> [--json]             cones grouped by closed-point mld
  classify <file> [--json]             lc / klt / canonical / terminal flags
  smooth <file> [--json]               per-cone smoothness, index, box size
  resolve <file> -o <out>              write a smooth subdivision pair file
  witness <file> --cone ID -o <out>    subdivide once at the mld witness
  product <fileA> <fileB> -o <out>     write the product pair file
  verify [--random | --file F [--file2 G]] [--props LIST]
         [--rank R] [--count N] [--seed S] [--max-rays M] [--coeffs MODE]
                                       run property checkers (exit 1 on
                                       violation); MODE is zero|random|ones;
                                       LIST from lsc,bound,nonsing,
                                       resolution,product
  help                                 this text

Use -o - to write to standard output. All numbers are exact rationals.
";

/// Runs the tool; returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(args, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        _ => 3,
    }
}

struct Parsed {
    positional: Vec<String>,
    cone: Option<usize>,
    output: Option<String>,
    json: bool,
    random: bool,
    file: Option<String>,
    file2: Option<String>,
    props: Option<String>,
    rank: usize,
    count: usize,
    seed: u64,
    max_rays: usize,
    coeffs: CoefficientMode,
}

fn usage_err(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        msg: msg.into(),
    }
}

fn parse_args(args: &[String]) -> Result<Parsed, Error> {
    let mut parsed = Parsed {
        positional: Vec::new(),
        cone: None,
        output: None,
        json: false,
        random: false,
        file: None,
        file2: None,
        props: None,
        rank: 3,
        count: 20,
        seed: 0,
        max_rays: 8,
        coeffs: CoefficientMode::RandomRationals,
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let mut value = |name: &str| -> Result<String, Error> {
            it.next()
                .cloned()
                .ok_or_else(|| usage_err(format!("{name} needs a value")))
        };
        match arg.as_str() {
            "--json" => parsed.json = true,
            "--random" => parsed.random = true,
            "--all" => {}
            "--cone" => {
                let v = value("--cone")?;
                parsed.cone = Some(
                    v.parse()
                        .map_err(|_| usage_err(format!("bad cone id {v:?}")))?,
                );
            }
            "-o" | "--output" => parsed.output = Some(value("-o")?),
            "--file" => parsed.file = Some(value("--file")?),
            "--file2" => parsed.file2 = Some(value("--file2")?),
            "--props" => parsed.props = Some(value("--props")?),
            "--rank" => {
                let v = value("--rank")?;
                parsed.rank = v
                    .parse()
                    .map_err(|_| usage_err(format!("bad rank {v:?}")))?;
            }
            "--count" => {
                let v = value("--count")?;
                parsed.count = v
                    .parse()
                    .map_err(|_| usage_err(format!("bad count {v:?}")))?;
            }
            "--seed" => {
                let v = value("--seed")?;
                parsed.seed = v
                    .parse()
                    .map_err(|_| usage_err(format!("bad seed {v:?}")))?;
            }
            "--max-rays" => {
                let v = value("--max-rays")?;
                parsed.max_rays = v
                    .parse()
                    .map_err(|_| usage_err(format!("bad ray count {v:?}")))?;
            }
            "--coeffs" => {
                parsed.coeffs = match value("--coeffs")?.as_str() {
                    "zero" => CoefficientMode::ZeroBoundary,
                    "random" => CoefficientMode::RandomRationals,
                    "ones" => CoefficientMode::AllOnes,
                    other => return Err(usage_err(format!("unknown coefficient mode {other:?}"))),
                };
            }
            flag if flag.starts_with('-') && flag != "-" => {
                return Err(usage_err(format!("unknown flag {flag:?}")));
            }
            _ => parsed.positional.push(arg.clone()),
        }
    }
    Ok(parsed)
}

fn load(path: &str) -> Result<(String, ToricLogPair, PairFile), Error> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage_err(format!("cannot read {path}: {e}")))?;
    let file = files::parse_pair_file(&text)?;
    let pair = file.to_pair()?;
    Ok((text, pair, file))
}

fn write_output(path: &str, content: &str, out: &mut dyn Write) -> Result<(), Error> {
    if path == "-" {
        out.write_all(content.as_bytes())
            .map_err(|e| usage_err(format!("write failed: {e}")))
    } else {
        std::fs::write(path, content).map_err(|e| usage_err(format!("cannot write {path}: {e}")))
    }
}

fn dispatch(args: &[String], out: &mut dyn Write) -> Result<i32, Error> {
    let Some(command) = args.first() else {
        return Err(usage_err("missing command; try `toric-mld help`"));
    };
    let rest = parse_args(&args[1..])?;
    let w = |out: &mut dyn Write, s: String| -> Result<(), Error> {
        out.write_all(s.as_bytes())
            .map_err(|e| usage_err(format!("write failed: {e}")))
    };

    match command.as_str() {
        "help" | "--help" | "-h" => {
            w(out, USAGE.to_string())?;
            Ok(0)
        }
        "--version" | "version" => {
            w(out, format!("toric-mld {}\n", env!("CARGO_PKG_VERSION")))?;
            Ok(0)
        }
        "mld" => cmd_mld(&rest, out),
        "spectrum" => cmd_spectrum(&rest, out),
        "stratify" => cmd_stratify(&rest, out),
        "classify" => cmd_classify(&rest, out),
        "smooth" => cmd_smooth(&rest, out),
        "resolve" => cmd_resolve(&rest, out),
        "witness" => cmd_witness(&rest, out),
        "product" => cmd_product(&rest, out),
        "verify" => cmd_verify(&rest, out),
        other => Err(usage_err(format!("unknown command {other:?}"))),
    }
}

fn one_file(rest: &Parsed) -> Result<&str, Error> {
    match rest.positional.as_slice() {
        [f] => Ok(f),
        _ => Err(usage_err("expected exactly one pair file")),
    }
}

fn cmd_mld(rest: &Parsed, out: &mut dyn Write) -> Result<i32, Error> {
    let (text, pair, file) = load(one_file(rest)?)?;
    let report = pair.report();
    let class = pair.classify();
    let ids: Vec<usize> = match rest.cone {
        None => (0..pair.fan().cones().len()).collect(),
        Some(id) => {
            if id >= pair.fan().cones().len() {
                return Err(usage_err(format!(
                    "cone id {id} out of range (fan has {} cones)",
                    pair.fan().cones().len()
                )));
            }
            vec![id]
        }
    };
    if rest.json {
        if rest.cone.is_none() {
            let json =
                files::report_json(&file.name, &pair, &report, &class, &files::digest(&text));
            writeln!(out, "{json}").ok();
        } else {
            let mut records = Vec::new();
            for id in ids {
                records.push(cone_record_json(&pair, &report, id));
            }
            writeln!(out, "[{}]", records.join(",")).ok();
        }
    } else {
        writeln!(out, "pair {}: rank {}", file.name, pair.fan().rank()).ok();
        writeln!(out, "id  rays            dim  a_sigma  mld  witness").ok();
        for id in ids {
            writeln!(out, "{}", cone_record_text(&pair, &report, id)).ok();
        }
    }
    Ok(0)
}

fn cone_record_text(pair: &ToricLogPair, report: &crate::logpair::MldReport, id: usize) -> String {
    let fan = pair.fan();
    let rays: Vec<String> = fan
        .cone_ray_indices(id)
        .iter()
        .map(|i| i.to_string())
        .collect();
    format!(
        "{id:<3} [{:<13}] {:<4} {:<8} {:<4} {}",
        rays.join(","),
        fan.cones()[id].dim(),
        report.orbit[id].value.to_string(),
        report.closed_point[id].to_string(),
        report.orbit[id].witness
    )
}

fn cone_record_json(pair: &ToricLogPair, report: &crate::logpair::MldReport, id: usize) -> String {
    let fan = pair.fan();
    let rays: Vec<String> = fan
        .cone_ray_indices(id)
        .iter()
        .map(|i| i.to_string())
        .collect();
    let witness: Vec<String> = report.orbit[id]
        .witness
        .coords()
        .iter()
        .map(|c| c.to_string())
        .collect();
    format!(
        "{{\"id\":{id},\"rays\":[{}],\"dim\":{},\"orbit_mld\":\"{}\",\"closed_point_mld\":\"{}\",\"witness\":[{}]}}",
        rays.join(","),
        fan.cones()[id].dim(),
        report.orbit[id].value,
        report.closed_point[id],
        witness.join(",")
    )
}

fn cmd_spectrum(rest: &Parsed, out: &mut dyn Write) -> Result<i32, Error> {
    let (_, pair, _) = load(one_file(rest)?)?;
    let report = pair.report();
    if rest.json {
        let values: Vec<String> = report.spectrum.iter().map(|v| format!("\"{v}\"")).collect();
        writeln!(out, "{{\"spectrum\":[{}]}}", values.join(",")).ok();
    } else {
        let values: Vec<String> = report.spectrum.iter().map(|v| v.to_string()).collect();
        writeln!(out, "spectrum: {{{}}}", values.join(", ")).ok();
    }
    Ok(0)
}

fn cmd_stratify(rest: &Parsed, out: &mut dyn Write) -> Result<i32, Error> {
    let (_, pair, _) = load(one_file(rest)?)?;
    let report = pair.report();
    if rest.json {
        let strata: Vec<String> = report
            .strata
            .iter()
            .map(|(value, ids)| {
                let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
                format!("{{\"value\":\"{value}\",\"cones\":[{}]}}", ids.join(","))
            })
            .collect();
        writeln!(out, "{{\"strata\":[{}]}}", strata.join(",")).ok();
    } else {
        for (value, ids) in &report.strata {
            let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
            writeln!(out, "mld {value}: cones [{}]", ids.join(", ")).ok();
        }
    }
    Ok(0)
}

fn cmd_classify(rest: &Parsed, out: &mut dyn Write) -> Result<i32, Error> {
    let (_, pair, _) = load(one_file(rest)?)?;
    let class = pair.classify();
    let flags = [
        ("log_canonical", &class.log_canonical),
        ("klt", &class.klt),
        ("canonical", &class.canonical),
        ("terminal", &class.terminal),
    ];
    if rest.json {
        let parts: Vec<String> = flags
            .iter()
            .map(|(name, f)| match f.violator {
                Some(v) if !f.holds => {
                    format!("\"{name}\":{{\"holds\":false,\"violator\":{v}}}")
                }
                _ => format!("\"{name}\":{{\"holds\":true}}"),
            })
            .collect();
        writeln!(out, "{{{}}}", parts.join(",")).ok();
    } else {
        for (name, f) in flags {
            if f.holds {
                writeln!(out, "{name}: yes").ok();
            } else {
                writeln!(out, "{name}: no (cone {})", f.violator.expect("recorded")).ok();
            }
        }
    }
    Ok(0)
}

fn cmd_smooth(rest: &Parsed, out: &mut dyn Write) -> Result<i32, Error> {
    let (_, pair, _) = load(one_file(rest)?)?;
    let fan = pair.fan();
    if rest.json {
        let mut records = Vec::new();
        for (id, cone) in fan.cones().iter().enumerate() {
            let (index, box_size) = match cone.box_points() {
                Ok(b) => (format!("\"{}\"", b.index), b.points.len().to_string()),
                Err(_) => ("null".to_string(), "null".to_string()),
            };
            records.push(format!(
                "{{\"id\":{id},\"dim\":{},\"smooth\":{},\"index\":{index},\"box_points\":{box_size}}}",
                cone.dim(),
                cone.is_smooth()
            ));
        }
        writeln!(
            out,
            "{{\"cones\":[{}],\"fan_smooth\":{}}}",
            records.join(","),
            fan.is_smooth()
        )
        .ok();
    } else {
        writeln!(out, "id  dim  smooth  index  |P_sigma|").ok();
        for (id, cone) in fan.cones().iter().enumerate() {
            let (index, box_size) = match cone.box_points() {
                Ok(b) => (b.index.to_string(), b.points.len().to_string()),
                Err(_) => ("-".to_string(), "-".to_string()),
            };
            writeln!(
                out,
                "{id:<3} {:<4} {:<7} {index:<6} {box_size}",
                cone.dim(),
                cone.is_smooth()
            )
            .ok();
        }
        writeln!(out, "fan smooth: {}", fan.is_smooth()).ok();
    }
    Ok(0)
}

/// Boundary for a subdivision target: original coefficients on surviving
/// rays, zero on exceptional ones. Crepant coefficients 1 - phi(v) can
/// leave [0, 1], which the file format rejects, so the discrepancies are
/// reported instead of stored.
fn subdivided_pair_file(name: &str, pair: &ToricLogPair, sub: &Subdivision) -> PairFile {
    let target = &sub.target;
    let boundary: Vec<Rational> = target
        .rays()
        .iter()
        .map(|r| match pair.fan().ray_index(r) {
            Some(i) => pair.boundary()[i].clone(),
            None => Rational::zero(),
        })
        .collect();
    let target_pair =
        ToricLogPair::new(target.clone(), boundary).expect("subdivision target is a valid fan");
    PairFile::from_pair(name, &target_pair)
}

fn new_ray_summary(pair: &ToricLogPair, sub: &Subdivision) -> String {
    let mut s = String::new();
    for r in sub.target.rays() {
        if pair.fan().ray_index(r).is_some() {
            continue;
        }
        let a = pair
            .divisor_discrepancy(r)
            .expect("new ray lies in the support");
        let _ = writeln!(s, "new ray {r}: log discrepancy {a}");
    }
    s
}

fn cmd_resolve(rest: &Parsed, out: &mut dyn Write) -> Result<i32, Error> {
    let (_, pair, file) = load(one_file(rest)?)?;
    let output = rest
        .output
        .as_deref()
        .ok_or_else(|| usage_err("resolve needs -o <out>"))?;
    let sub = pair.fan().resolve()?;
    let resolved = subdivided_pair_file(&format!("{} (resolved)", file.name), &pair, &sub);
    write_output(output, &resolved.serialize(), out)?;
    writeln!(
        out,
        "resolved: {} cones, {} rays, smooth: {}",
        sub.target.cones().len(),
        sub.target.rays().len(),
        sub.target.is_smooth()
    )
    .ok();
    write!(out, "{}", new_ray_summary(&pair, &sub)).ok();
    Ok(0)
}

fn cmd_witness(rest: &Parsed, out: &mut dyn Write) -> Result<i32, Error> {
    let (_, pair, file) = load(one_file(rest)?)?;
    let id = rest
        .cone
        .ok_or_else(|| usage_err("witness needs --cone ID"))?;
    if id >= pair.fan().cones().len() {
        return Err(usage_err(format!(
            "cone id {id} out of range (fan has {} cones)",
            pair.fan().cones().len()
        )));
    }
    if pair.fan().cones()[id].is_zero_cone() {
        return Err(usage_err(format!(
            "cone {id} is the zero cone; its mld 0 is attained at the origin and \
             there is nothing to subdivide"
        )));
    }
    let output = rest
        .output
        .as_deref()
        .ok_or_else(|| usage_err("witness needs -o <out>"))?;
    let orbit = pair.mld_orbit_by_id(id)?;
    writeln!(
        out,
        "cone {id}: a_sigma = {}, witness {}",
        orbit.value, orbit.witness
    )
    .ok();
    if pair.fan().ray_index(&orbit.witness).is_some() {
        writeln!(out, "witness is an existing ray; subdivision is a no-op").ok();
        let unchanged = PairFile::from_pair(&file.name, &pair);
        write_output(output, &unchanged.serialize(), out)?;
        return Ok(0);
    }
    let sub = pair.fan().stellar_subdivide(&orbit.witness)?;
    let subdivided = subdivided_pair_file(&format!("{} (witness)", file.name), &pair, &sub);
    write_output(output, &subdivided.serialize(), out)?;
    let a = pair
        .divisor_discrepancy(&orbit.witness)
        .expect("witness lies in the cone");
    writeln!(
        out,
        "new ray {}: log discrepancy {} (equals a_sigma: {})",
        orbit.witness,
        a,
        a == orbit.value
    )
    .ok();
    Ok(0)
}

fn cmd_product(rest: &Parsed, out: &mut dyn Write) -> Result<i32, Error> {
    let (a_path, b_path) = match rest.positional.as_slice() {
        [a, b] => (a, b),
        _ => return Err(usage_err("product needs two pair files")),
    };
    let output = rest
        .output
        .as_deref()
        .ok_or_else(|| usage_err("product needs -o <out>"))?;
    let (_, pa, fa) = load(a_path)?;
    let (_, pb, fb) = load(b_path)?;
    let prod = product_pair(&pa, &pb);
    if prod.fan().rank() >= 8 {
        writeln!(out, "warning: product rank {} is large", prod.fan().rank()).ok();
    }
    let file = PairFile::from_pair(&format!("{} x {}", fa.name, fb.name), &prod);
    write_output(output, &file.serialize(), out)?;
    writeln!(
        out,
        "product: rank {}, {} cones",
        prod.fan().rank(),
        prod.fan().cones().len()
    )
    .ok();
    Ok(0)
}

fn cmd_verify(rest: &Parsed, out: &mut dyn Write) -> Result<i32, Error> {
    let all_props = ["lsc", "bound", "nonsing", "resolution", "product"];
    let props: Vec<String> = match &rest.props {
        None => all_props.iter().map(|s| s.to_string()).collect(),
        Some(list) => {
            let names: Vec<String> = list.split(',').map(|s| s.trim().to_string()).collect();
            for n in &names {
                if !all_props.contains(&n.as_str()) {
                    return Err(usage_err(format!(
                        "unknown property {n:?}; choose from {}",
                        all_props.join(",")
                    )));
                }
            }
            names
        }
    };

    let pairs: Vec<ToricLogPair> = match &rest.file {
        Some(first) if !rest.random => {
            let mut pairs = vec![load(first)?.1];
            if let Some(second) = &rest.file2 {
                pairs.push(load(second)?.1);
            }
            pairs
        }
        _ => {
            if !(2..=5).contains(&rest.rank) {
                return Err(usage_err("--rank must be between 2 and 5"));
            }
            let cfg = GenConfig {
                rank: rest.rank,
                max_rays: rest.max_rays,
                coefficient_mode: rest.coeffs,
                seed: rest.seed,
                count: rest.count,
            };
            writeln!(
                out,
                "generating {} pairs (rank {}, seed {})",
                cfg.count, cfg.rank, cfg.seed
            )
            .ok();
            gen_pairs(&cfg)?
        }
    };

    let mut results: Vec<PropertyResult> = Vec::new();
    for prop in &props {
        let mut merged: Option<PropertyResult> = None;
        let mut push = |r: PropertyResult| match &mut merged {
            None => merged = Some(r),
            Some(m) => m.merge(r),
        };
        match prop.as_str() {
            "lsc" => pairs.iter().for_each(|p| push(check_lsc(p))),
            "bound" => pairs.iter().for_each(|p| push(check_bound(p))),
            "nonsing" => pairs
                .iter()
                .for_each(|p| push(check_nonsingularity_criterion(p))),
            "resolution" => pairs.iter().for_each(|p| push(check_resolution_oracle(p))),
            "product" => {
                if pairs.len() == 1 {
                    push(check_product(&pairs[0], &pairs[0]));
                } else {
                    for chunk in pairs.chunks(2) {
                        if let [a, b] = chunk {
                            push(check_product(a, b));
                        }
                    }
                }
            }
            _ => unreachable!("validated above"),
        }
        if let Some(r) = merged {
            results.push(r);
        }
    }

    let mut failed = false;
    for r in &results {
        writeln!(
            out,
            "property {}: {} instances, {} violations",
            r.property,
            r.instances,
            r.violations.len()
        )
        .ok();
        for v in &r.violations {
            failed = true;
            writeln!(
                out,
                "violation ({}): cones {:?}, values {:?}",
                v.note, v.cones, v.values
            )
            .ok();
            writeln!(out, "--- replay pair ---\n{}-------------------", v.pair).ok();
        }
    }
    writeln!(out, "seed {}; {} pairs checked", rest.seed, pairs.len()).ok();
    Ok(if failed { 1 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cmd(args: &[&str]) -> (i32, String, String) {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&args, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn help_and_version() {
        let (code, out, _) = run_cmd(&["help"]);
        assert_eq!(code, 0);
        assert!(out.contains("usage"));
        let (code, out, _) = run_cmd(&["--version"]);
        assert_eq!(code, 0);
        assert!(out.contains("toric-mld"));
    }

    #[test]
    fn unknown_command_is_usage_error() {
        let (code, _, err) = run_cmd(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown command"));
    }

    #[test]
    fn missing_file_is_usage_error() {
        let (code, _, _) = run_cmd(&["mld", "/nonexistent/path.pair"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn malformed_props_list_is_usage_error() {
        let (code, _, err) = run_cmd(&["verify", "--random", "--props", "lsc,nonsense"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown property"));
    }
}
