//! The pair file format (line-oriented exact text) and report
//! serialization (stable-ordered JSON and human-readable tables).
//!
//! The grammar is documented in docs/FORMAT.md. All numbers are exact
//! rational strings; floats are rejected by construction.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{Fan, Validation};
use crate::lattice::{Int, LatticeVector, Rational};
use crate::logpair::{Classification, MldReport, ToricLogPair};

/// In-memory form of a pair file: rays and maximal cones of the fan plus
/// the boundary coefficient b_i per ray, in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFile {
    pub name: String,
    pub rank: usize,
    pub rays: Vec<LatticeVector>,
    pub cones: Vec<Vec<usize>>,
    pub boundary: Vec<Rational>,
}

/// Parses the text of a pair file. Structural errors carry 1-based line
/// numbers.
pub fn parse_pair_file(text: &str) -> Result<PairFile> {
    let mut name: Option<String> = None;
    let mut rank: Option<usize> = None;
    let mut rays: Vec<LatticeVector> = Vec::new();
    let mut ray_lines: Vec<usize> = Vec::new();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    let mut boundary: Option<Vec<Rational>> = None;

    let err = |line: usize, msg: String| Error::Parse { line, msg };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().expect("nonempty line");
        match keyword {
            "name" => {
                if name.is_some() {
                    return Err(err(line_no, "duplicate name line".into()));
                }
                let rest = line["name".len()..].trim();
                if rest.is_empty() {
                    return Err(err(line_no, "name line needs a value".into()));
                }
                name = Some(rest.to_string());
            }
            "rank" => {
                if rank.is_some() {
                    return Err(err(line_no, "duplicate rank line".into()));
                }
                let value: usize = tokens
                    .next()
                    .ok_or_else(|| err(line_no, "rank line needs a value".into()))?
                    .parse()
                    .map_err(|_| err(line_no, "rank must be a nonnegative integer".into()))?;
                if tokens.next().is_some() {
                    return Err(err(line_no, "trailing tokens after rank".into()));
                }
                rank = Some(value);
            }
            "ray" => {
                let n = rank.ok_or_else(|| err(line_no, "ray before rank".into()))?;
                let coords: Vec<Int> = tokens
                    .map(|t| {
                        t.parse::<Int>()
                            .map_err(|_| err(line_no, format!("bad integer {t:?}")))
                    })
                    .collect::<Result<_>>()?;
                if coords.len() != n {
                    return Err(err(
                        line_no,
                        format!("ray needs {n} coordinates, got {}", coords.len()),
                    ));
                }
                let v = LatticeVector::new(coords);
                if v.is_zero() {
                    return Err(err(line_no, format!("ray {} is zero", rays.len())));
                }
                if !v.content().is_one() {
                    return Err(err(line_no, format!("ray {} is not primitive", rays.len())));
                }
                if rays.contains(&v) {
                    return Err(err(
                        line_no,
                        format!("ray {} duplicates an earlier ray", rays.len()),
                    ));
                }
                rays.push(v);
                ray_lines.push(line_no);
            }
            "cone" => {
                let indices: Vec<usize> = tokens
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| err(line_no, format!("bad ray index {t:?}")))
                    })
                    .collect::<Result<_>>()?;
                if indices.is_empty() {
                    return Err(err(line_no, "cone line needs ray indices".into()));
                }
                for &i in &indices {
                    if i >= rays.len() {
                        return Err(err(line_no, format!("ray index {i} not yet declared")));
                    }
                }
                let mut sorted = indices.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != indices.len() {
                    return Err(err(line_no, "cone repeats a ray index".into()));
                }
                cones.push(sorted);
            }
            "boundary" => {
                if boundary.is_some() {
                    return Err(err(line_no, "duplicate boundary line".into()));
                }
                let values: Vec<Rational> = tokens
                    .map(|t| parse_rational(t).map_err(|msg| err(line_no, msg)))
                    .collect::<Result<_>>()?;
                if values.len() != rays.len() {
                    return Err(err(
                        line_no,
                        format!(
                            "boundary needs {} coefficients, got {}",
                            rays.len(),
                            values.len()
                        ),
                    ));
                }
                boundary = Some(values);
            }
            other => {
                return Err(err(line_no, format!("unknown directive {other:?}")));
            }
        }
    }

    let rank = rank.ok_or_else(|| err(text.lines().count(), "missing rank line".into()))?;
    let boundary = match boundary {
        Some(b) => b,
        None if rays.is_empty() => Vec::new(),
        None => return Err(err(text.lines().count(), "missing boundary line".into())),
    };

    Ok(PairFile {
        name: name.unwrap_or_else(|| "unnamed".into()),
        rank,
        rays,
        cones,
        boundary,
    })
}

/// Parses "p" or "p/q" with q a positive integer.
pub fn parse_rational(token: &str) -> std::result::Result<Rational, String> {
    match token.split_once('/') {
        None => {
            let n: Int = token
                .parse()
                .map_err(|_| format!("bad rational {token:?}"))?;
            Ok(Rational::from_integer(n))
        }
        Some((p, q)) => {
            let n: Int = p.parse().map_err(|_| format!("bad rational {token:?}"))?;
            let d: Int = q.parse().map_err(|_| format!("bad rational {token:?}"))?;
            if !d.is_positive() {
                return Err(format!("denominator of {token:?} must be positive"));
            }
            Ok(Rational::new(n, d))
        }
    }
}

impl PairFile {
    /// Builds the validated fan and log pair the file describes.
    ///
    /// Every declared ray must survive as a ray of the fan (be used by a
    /// cone and be extreme in it); this keeps the boundary alignment
    /// unambiguous.
    pub fn to_pair(&self) -> Result<ToricLogPair> {
        let gens: Vec<Vec<LatticeVector>> = self
            .cones
            .iter()
            .map(|c| c.iter().map(|&i| self.rays[i].clone()).collect())
            .collect();
        let fan = Fan::new(self.rank, &gens, Validation::Full)?;
        for (i, r) in self.rays.iter().enumerate() {
            if fan.ray_index(r).is_none() {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("ray {i} {r} is not an extreme ray of any listed cone"),
                });
            }
        }
        let mut boundary = vec![Rational::zero(); fan.rays().len()];
        for (r, b) in self.rays.iter().zip(&self.boundary) {
            boundary[fan.ray_index(r).expect("checked above")] = b.clone();
        }
        ToricLogPair::new(fan, boundary)
    }

    /// Canonical file for a pair: rays in fan order, cones as sorted index
    /// lists in sorted order, boundary aligned with the rays.
    pub fn from_pair(name: &str, pair: &ToricLogPair) -> PairFile {
        let fan = pair.fan();
        let mut cones: Vec<Vec<usize>> = fan
            .maximal_ids()
            .iter()
            .map(|&id| fan.cone_ray_indices(id))
            .filter(|c| !c.is_empty())
            .collect();
        cones.sort();
        PairFile {
            name: name.to_string(),
            rank: fan.rank(),
            rays: fan.rays().to_vec(),
            cones,
            boundary: pair.boundary().to_vec(),
        }
    }

    /// Canonical serialization; `parse_pair_file` inverts it exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name {}\n", self.name));
        out.push_str(&format!("rank {}\n", self.rank));
        for r in &self.rays {
            out.push_str("ray");
            for c in r.coords() {
                out.push_str(&format!(" {c}"));
            }
            out.push('\n');
        }
        for cone in &self.cones {
            out.push_str("cone");
            for i in cone {
                out.push_str(&format!(" {i}"));
            }
            out.push('\n');
        }
        if !self.rays.is_empty() {
            out.push_str("boundary");
            for b in &self.boundary {
                out.push_str(&format!(" {b}"));
            }
            out.push('\n');
        }
        out
    }
}

/// FNV-1a 64-bit digest of the input text, the replay key printed in every
/// report.
pub fn digest(text: &str) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in text.bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("fnv1a64:{hash:016x}")
}

pub(crate) fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn json_vector(v: &LatticeVector) -> String {
    let coords: Vec<String> = v.coords().iter().map(|c| c.to_string()).collect();
    format!("[{}]", coords.join(","))
}

/// The full report as deterministic JSON: fixed field order, exact rational
/// strings, cones by canonical id.
pub fn report_json(
    name: &str,
    pair: &ToricLogPair,
    report: &MldReport,
    class: &Classification,
    input_digest: &str,
) -> String {
    let fan = pair.fan();
    let mut out = String::new();
    out.push('{');
    out.push_str(&format!("\"name\":\"{}\",", json_escape(name)));
    out.push_str(&format!(
        "\"tool_version\":\"{}\",",
        env!("CARGO_PKG_VERSION")
    ));
    out.push_str(&format!("\"input_digest\":\"{input_digest}\","));
    out.push_str(&format!("\"rank\":{},", fan.rank()));

    let rays: Vec<String> = fan.rays().iter().map(json_vector).collect();
    out.push_str(&format!("\"rays\":[{}],", rays.join(",")));
    let boundary: Vec<String> = pair.boundary().iter().map(|b| format!("\"{b}\"")).collect();
    out.push_str(&format!("\"boundary\":[{}],", boundary.join(",")));

    let mut cones = Vec::new();
    for (id, cone) in fan.cones().iter().enumerate() {
        let ray_ids: Vec<String> = fan
            .cone_ray_indices(id)
            .iter()
            .map(|i| i.to_string())
            .collect();
        let index = match cone.index() {
            Ok(i) => format!("\"{i}\""),
            Err(_) => "null".to_string(),
        };
        cones.push(format!(
            "{{\"id\":{id},\"rays\":[{}],\"dim\":{},\"orbit_mld\":\"{}\",\"closed_point_mld\":\"{}\",\"witness\":{},\"smooth\":{},\"index\":{index}}}",
            ray_ids.join(","),
            cone.dim(),
            report.orbit[id].value,
            report.closed_point[id],
            json_vector(&report.orbit[id].witness),
            cone.is_smooth(),
        ));
    }
    out.push_str(&format!("\"cones\":[{}],", cones.join(",")));

    let spectrum: Vec<String> = report.spectrum.iter().map(|v| format!("\"{v}\"")).collect();
    out.push_str(&format!("\"spectrum\":[{}],", spectrum.join(",")));

    let strata: Vec<String> = report
        .strata
        .iter()
        .map(|(value, ids)| {
            let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
            format!("{{\"value\":\"{value}\",\"cones\":[{}]}}", ids.join(","))
        })
        .collect();
    out.push_str(&format!("\"strata\":[{}],", strata.join(",")));

    let flag = |f: &crate::logpair::Flag| -> String {
        match f.violator {
            Some(v) if !f.holds => format!("{{\"holds\":false,\"violator\":{v}}}"),
            _ => "{\"holds\":true}".to_string(),
        }
    };
    out.push_str(&format!(
        "\"classification\":{{\"log_canonical\":{},\"klt\":{},\"canonical\":{},\"terminal\":{}}}",
        flag(&class.log_canonical),
        flag(&class.klt),
        flag(&class.canonical),
        flag(&class.terminal)
    ));
    out.push('}');
    out
}

/// Human-readable per-cone table.
pub fn report_text(
    name: &str,
    pair: &ToricLogPair,
    report: &MldReport,
    class: &Classification,
) -> String {
    let fan = pair.fan();
    let mut out = String::new();
    out.push_str(&format!("pair {name}: rank {}\n", fan.rank()));
    out.push_str("rays:\n");
    for (i, (r, b)) in fan.rays().iter().zip(pair.boundary()).enumerate() {
        let a = Rational::one() - b;
        out.push_str(&format!("  {i}: {r}  b={b}  a={a}\n"));
    }
    out.push_str("cones (id, rays, dim, a_sigma, closed-point mld, witness):\n");
    for (id, cone) in fan.cones().iter().enumerate() {
        let ray_ids: Vec<String> = fan
            .cone_ray_indices(id)
            .iter()
            .map(|i| i.to_string())
            .collect();
        out.push_str(&format!(
            "  {id}: [{}] dim={} a={} mld={} witness={}\n",
            ray_ids.join(","),
            cone.dim(),
            report.orbit[id].value,
            report.closed_point[id],
            report.orbit[id].witness,
        ));
    }
    let spectrum: Vec<String> = report.spectrum.iter().map(|v| v.to_string()).collect();
    out.push_str(&format!("spectrum: {{{}}}\n", spectrum.join(", ")));
    let flag_str = |f: &crate::logpair::Flag| -> String {
        if f.holds {
            "yes".to_string()
        } else {
            format!("no (cone {})", f.violator.expect("violator recorded"))
        }
    };
    out.push_str(&format!(
        "classification: lc={} klt={} canonical={} terminal={}\n",
        flag_str(&class.log_canonical),
        flag_str(&class.klt),
        flag_str(&class.canonical),
        flag_str(&class.terminal)
    ));
    out
}
