//! wasm-bindgen surface for the browser demo. Three operations, all
//! string-in / JSON-string-out so the page needs no glue types:
//!
//! * [`analyze`] - parse a pair file, return the full mld report;
//! * [`resolve_pair`] - smooth resolution, returning the subdivided pair
//!   file and the crepant discrepancies of the new rays;
//! * [`samples`] - built-in example pair files.
//!
//! Errors come back as `{"error": "..."}` rather than thrown exceptions.

use wasm_bindgen::prelude::wasm_bindgen;

use toric_mld::files::{self, PairFile};
use toric_mld::logpair::ToricLogPair;

fn error_json(msg: &str) -> String {
    format!("{{\"error\":\"{}\"}}", json_escape(msg))
}

fn json_escape(s: &str) -> String {
    s.chars()
        .flat_map(|c| match c {
            '"' => "\\\"".chars().collect::<Vec<_>>(),
            '\\' => "\\\\".chars().collect(),
            '\n' => "\\n".chars().collect(),
            c => vec![c],
        })
        .collect()
}

fn load(text: &str) -> Result<(ToricLogPair, PairFile), String> {
    let file = files::parse_pair_file(text).map_err(|e| e.to_string())?;
    let pair = file.to_pair().map_err(|e| e.to_string())?;
    Ok((pair, file))
}

/// Full report for a pair file: rays, per-cone mld data, spectrum, strata,
/// classification. `{"error": ...}` on invalid input.
#[wasm_bindgen]
pub fn analyze(pair_text: &str) -> String {
    match load(pair_text) {
        Err(msg) => error_json(&msg),
        Ok((pair, file)) => {
            let report = pair.report();
            let class = pair.classify();
            files::report_json(
                &file.name,
                &pair,
                &report,
                &class,
                &files::digest(pair_text),
            )
        }
    }
}

/// Smooth resolution of the fan. Returns the subdivided pair file text
/// (exceptional rays carry boundary 0) plus each new ray with its crepant
/// log discrepancy under the original pair.
#[wasm_bindgen]
pub fn resolve_pair(pair_text: &str) -> String {
    let (pair, file) = match load(pair_text) {
        Err(msg) => return error_json(&msg),
        Ok(x) => x,
    };
    let sub = match pair.fan().resolve() {
        Err(e) => return error_json(&e.to_string()),
        Ok(s) => s,
    };
    let boundary: Vec<toric_mld::Rational> = sub
        .target
        .rays()
        .iter()
        .map(|r| match pair.fan().ray_index(r) {
            Some(i) => pair.boundary()[i].clone(),
            None => num_zero(),
        })
        .collect();
    let resolved = match ToricLogPair::new(sub.target.clone(), boundary) {
        Err(e) => return error_json(&e.to_string()),
        Ok(p) => p,
    };
    let out_file = PairFile::from_pair(&format!("{} (resolved)", file.name), &resolved);

    let mut new_rays = Vec::new();
    for r in sub.target.rays() {
        if pair.fan().ray_index(r).is_some() {
            continue;
        }
        let a = pair
            .divisor_discrepancy(r)
            .expect("new ray lies in the source support");
        let coords: Vec<String> = r.coords().iter().map(|c| c.to_string()).collect();
        new_rays.push(format!(
            "{{\"ray\":[{}],\"discrepancy\":\"{a}\"}}",
            coords.join(",")
        ));
    }
    format!(
        "{{\"pair\":\"{}\",\"smooth\":{},\"new_rays\":[{}]}}",
        json_escape(&out_file.serialize()),
        sub.target.is_smooth(),
        new_rays.join(",")
    )
}

fn num_zero() -> toric_mld::Rational {
    toric_mld::Rational::new(0.into(), 1.into())
}

/// Built-in example pair files for the demo page.
#[wasm_bindgen]
pub fn samples() -> String {
    let items: Vec<(&str, &str)> = vec![
        (
            "A1 surface point",
            "name A1\nrank 2\nray 1 0\nray 1 2\ncone 0 1\nboundary 0 0\n",
        ),
        (
            "A3 surface point",
            "name A3\nrank 2\nray 1 0\nray 1 4\ncone 0 1\nboundary 0 0\n",
        ),
        (
            "projective plane fan",
            "name P2\nrank 2\nray -1 -1\nray 0 1\nray 1 0\ncone 0 1\ncone 0 2\ncone 1 2\nboundary 0 0 0\n",
        ),
        (
            "quadrant with boundary",
            "name quadrant\nrank 2\nray 0 1\nray 1 0\ncone 0 1\nboundary 1/2 1/3\n",
        ),
        (
            "terminal quotient 1/2(1,1,1)",
            "name half(1,1,1)\nrank 3\nray -1 -1 2\nray 0 1 0\nray 1 0 0\ncone 0 1 2\nboundary 0 0 0\n",
        ),
        (
            "cone over a square (not simplicial)",
            "name square-cone\nrank 3\nray 0 0 1\nray 0 1 1\nray 1 0 1\nray 1 1 1\ncone 0 1 2 3\nboundary 0 0 0 0\n",
        ),
    ];
    let parts: Vec<String> = items
        .iter()
        .map(|(name, text)| {
            format!(
                "{{\"name\":\"{}\",\"text\":\"{}\"}}",
                json_escape(name),
                json_escape(text)
            )
        })
        .collect();
    format!("[{}]", parts.join(","))
}
