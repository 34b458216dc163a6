//! Region CSV: header `kind,boundary,r1,r2`, one row per sample.
//!
//! Polygon regions write their vertices (`hull` for hulled kinds, `vertex`
//! otherwise). An empty polygon region is written as a single `vertex` row
//! with blank coordinates so that it survives a round trip.

use std::fmt::Write as _;

use super::{RateRegion, RegionKind};
use crate::error::{Error, Result};
use crate::rates::RatePair;

pub const HEADER: &str = "kind,boundary,r1,r2";

/// Formats `x` with 9 significant digits, trimming trailing zeros.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{m}e{exp}")
    }
}

fn polygon_label(kind: RegionKind) -> &'static str {
    match kind {
        RegionKind::SuspiciousHulled | RegionKind::EavesSicHulled => "hull",
        _ => "vertex",
    }
}

pub fn write_regions(regions: &[&RateRegion]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in regions {
        let kind = r.kind.as_str();
        let mut row = |label: &str, p: &RatePair| {
            let _ = writeln!(out, "{kind},{label},{},{}", format_sig9(p.r1), format_sig9(p.r2));
        };
        match &r.vertices {
            Some(v) => {
                for p in v {
                    row(polygon_label(r.kind), p);
                }
            }
            None => {
                for p in &r.upper {
                    row("upper", p);
                }
                for p in &r.lower {
                    row("lower", p);
                }
            }
        }
        if r.vertices.as_ref().is_some_and(|v| v.is_empty()) {
            let _ = writeln!(out, "{kind},vertex,,");
        }
    }
    out
}

/// Parses CSV text back into regions; consecutive rows of one kind form
/// one region.
pub fn parse_regions(text: &str) -> Result<Vec<RateRegion>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == HEADER => {}
        other => return Err(Error::Parse(format!("expected header `{HEADER}`, found {other:?}"))),
    }
    let mut regions: Vec<RateRegion> = Vec::new();
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [kind, label, r1, r2] = fields[..] else {
            return Err(Error::Parse(format!("row {}: expected 4 fields", n + 2)));
        };
        let kind = RegionKind::parse(kind).ok_or_else(|| Error::Parse(format!("unknown kind `{kind}`")))?;
        let start_new = regions.last().is_none_or(|r| r.kind != kind);
        if start_new {
            regions.push(RateRegion { kind, upper: Vec::new(), lower: Vec::new(), vertices: None });
        }
        let region = regions.last_mut().expect("just pushed");
        if r1.is_empty() && r2.is_empty() {
            region.vertices.get_or_insert_with(Vec::new);
            continue;
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
        let p = RatePair::new(num(r1)?, num(r2)?);
        match label {
            "upper" => region.upper.push(p),
            "lower" => region.lower.push(p),
            "hull" | "vertex" => region.vertices.get_or_insert_with(Vec::new).push(p),
            other => return Err(Error::Parse(format!("unknown boundary `{other}`"))),
        }
    }
    Ok(regions)
}
