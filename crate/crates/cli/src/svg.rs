//! Minimal SVG plots of rate regions.

use std::fmt::Write;

use jamregion::{RatePair, RateRegion, RegionKind};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;
const TICKS: usize = 5;

fn style(kind: RegionKind) -> (&'static str, &'static str) {
    match kind {
        RegionKind::SuspiciousRaw | RegionKind::SuspiciousNullspace => ("#1f77b4", "none"),
        RegionKind::SuspiciousHulled => ("#1f77b4", "#1f77b422"),
        RegionKind::EavesMmse | RegionKind::EavesSiLowerbound => ("#d62728", "none"),
        RegionKind::EavesSic | RegionKind::EavesSicHulled => ("#ff7f0e", "none"),
        RegionKind::Intersection => ("#2ca02c", "#2ca02c66"),
    }
}

pub fn render(regions: &[&RateRegion]) -> String {
    let (mut x_max, mut y_max) = (0.0f64, 0.0f64);
    for p in regions.iter().flat_map(|r| r.points()) {
        x_max = x_max.max(p.r1);
        y_max = y_max.max(p.r2);
    }
    let x_max = nice_ceiling(x_max);
    let y_max = nice_ceiling(y_max);
    let map = |p: &RatePair| {
        (
            MARGIN + p.r1 / x_max * (WIDTH - 2.0 * MARGIN),
            HEIGHT - MARGIN - p.r2 / y_max * (HEIGHT - 2.0 * MARGIN),
        )
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let (x0, y0) = map(&RatePair::ORIGIN);
    let (x1, y1) = map(&RatePair::new(x_max, y_max));
    let _ = writeln!(out, r#"<path d="M{x0:.2},{y1:.2} V{y0:.2} H{x1:.2}" stroke="black" fill="none"/>"#);
    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let (tx, _) = map(&RatePair::new(f * x_max, 0.0));
        let (_, ty) = map(&RatePair::new(0.0, f * y_max));
        let _ = writeln!(
            out,
            r#"<line x1="{tx:.2}" y1="{y0:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black"/><text x="{tx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 4.0,
            y0 + 16.0,
            label(f * x_max)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{ty:.2}" x2="{x0:.2}" y2="{ty:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 4.0,
            x0 - 6.0,
            ty + 4.0,
            label(f * y_max)
        );
    }
    let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">R1 (bits/s/Hz)</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(
        out,
        r#"<text transform="translate(14,{:.2}) rotate(-90)" text-anchor="middle">R2 (bits/s/Hz)</text>"#,
        HEIGHT / 2.0
    );

    for (i, r) in regions.iter().enumerate() {
        let outline = r.outline();
        if outline.is_empty() {
            continue;
        }
        let (stroke, fill) = style(r.kind);
        let pts: Vec<String> = outline.iter().map(|p| {
            let (x, y) = map(p);
            format!("{x:.2},{y:.2}")
        }).collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" stroke="{stroke}" fill="{fill}" stroke-width="1.5"><title>{}</title></polygon>"#,
            pts.join(" "),
            r.kind
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" fill="{stroke}">{}</text>"#,
            WIDTH - MARGIN - 120.0,
            MARGIN + 14.0 * i as f64,
            r.kind
        );
    }
    out.push_str("</svg>\n");
    out
}

fn nice_ceiling(v: f64) -> f64 {
    if v.is_nan() || v <= 0.0 {
        return 1.0;
    }
    let step = 10f64.powf(v.log10().floor());
    (v / step).ceil() * step
}

fn label(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}
