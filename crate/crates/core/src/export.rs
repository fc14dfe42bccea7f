//! CSV and SVG output, plus atomic file writes.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::geometry::{boundary_polyline, RatePair};
use crate::regions::RegionBoundary;

/// Formats `x` like C's `%.12g`, independent of locale.
pub fn fmt_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits, for JSON output.
pub fn round_sig12(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig12(x).parse().unwrap_or(x)
    } else {
        x
    }
}

/// Boundary CSV: `param,r1_bits,r2_bits` per swept point, then a `# hull`
/// section of frontier vertices, then an optional `# beta_check` section.
pub fn boundary_csv(region: &RegionBoundary, beta_check: Option<f64>) -> String {
    let mut out = String::from("param,r1_bits,r2_bits\n");
    for p in &region.points {
        let _ = writeln!(out, "{},{},{}", fmt_sig12(p.param), fmt_sig12(p.corner.r1), fmt_sig12(p.corner.r2));
    }
    out.push_str("# hull\nr1_bits,r2_bits\n");
    for q in &region.hull {
        let _ = writeln!(out, "{},{}", fmt_sig12(q.r1), fmt_sig12(q.r2));
    }
    if let Some(d) = beta_check {
        let _ = writeln!(out, "# beta_check\nmax_hausdorff_bits\n{}", fmt_sig12(d));
    }
    out
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// Standalone SVG: capacity boundary (solid) and an optional time-sharing
/// boundary (dash-dot), axes in bits per channel use.
pub fn region_svg(capacity: &[RatePair], time_sharing: Option<&[RatePair]>) -> String {
    let cap = boundary_polyline(capacity);
    let ts = time_sharing.map(boundary_polyline);
    let all = cap.iter().chain(ts.iter().flatten());
    let (mx, my) = all.fold((0.0f64, 0.0f64), |(a, b), p| (a.max(p.r1), b.max(p.r2)));
    let xmax = nice_ceiling(mx);
    let ymax = nice_ceiling(my);
    let sx = |v: f64| MARGIN + v / xmax * (W - 2.0 * MARGIN);
    let sy = |v: f64| H - MARGIN - v / ymax * (H - 2.0 * MARGIN);
    let points = |line: &[RatePair]| {
        line.iter().map(|p| format!("{:.3},{:.3}", sx(p.r1), sy(p.r2))).collect::<Vec<_>>().join(" ")
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let (x0, y0) = (sx(0.0), sy(0.0));
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.3},{:.3} L{x0:.3},{y0:.3} L{:.3},{y0:.3}" fill="none" stroke="black"/>"#,
        sy(ymax),
        sx(xmax)
    );
    for k in 0..=4 {
        let v = xmax * k as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#, sx(v), y0 + 18.0, fmt_tick(v));
        let v = ymax * k as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#, x0 - 6.0, sy(v) + 4.0, fmt_tick(v));
    }
    let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">R1 (bits/channel use)</text>"#, W / 2.0, H - 15.0);
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.3}" text-anchor="middle" transform="rotate(-90 15 {:.3})">R2 (bits/channel use)</text>"#,
        H / 2.0,
        H / 2.0
    );
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#, points(&cap));
    if let Some(ts) = &ts {
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1.5" stroke-dasharray="8,3,2,3"/>"#,
            points(ts)
        );
    }
    let lx = W - MARGIN - 170.0;
    let _ = writeln!(s, r#"<line x1="{lx}" y1="{MARGIN}" x2="{}" y2="{MARGIN}" stroke="black" stroke-width="2"/>"#, lx + 30.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}">secrecy capacity</text>"#, lx + 36.0, MARGIN + 4.0);
    if ts.is_some() {
        let y = MARGIN + 18.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{y}" x2="{}" y2="{y}" stroke="black" stroke-width="1.5" stroke-dasharray="8,3,2,3"/>"#,
            lx + 30.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">time sharing</text>"#, lx + 36.0, y + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

fn nice_ceiling(v: f64) -> f64 {
    if !(v > 0.0) {
        return 1.0;
    }
    let step = 10f64.powf((v / 4.0).log10().floor());
    let mut top = step;
    while top < v {
        top += step;
    }
    top
}

fn fmt_tick(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    fmt_sig12(r)
}

/// Writes `contents` to `path` via a sibling temporary file and a rename, so
/// readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}
