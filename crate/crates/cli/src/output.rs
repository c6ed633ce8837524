//! Text reports, CSV pole tables and SVG strip maps. All numbers use fixed
//! formatting so that equal inputs give byte-identical files.

use std::fmt::Write;

use conebvp::domains::{DomainReport, Verdict};
use conebvp::scalar::C64;

fn num(v: f64) -> String {
    // avoid printing -0.000000000000
    let v = if v.abs() < 5e-13 { 0.0 } else { v };
    format!("{v:.12}")
}

fn complex(z: C64) -> String {
    let im = if z.im.abs() < 5e-13 { 0.0 } else { z.im };
    format!("{}{}{:.12}i", num(z.re), if im < 0.0 { "-" } else { "+" }, im.abs())
}

fn verdict(v: &Verdict) -> String {
    format!("{} ({})", if v.passed { "PASS" } else { "FAIL" }, v.detail)
}

pub fn text_report(r: &DomainReport) -> String {
    let w = &r.weight;
    let (lo, hi) = w.strip();
    let mut s = String::new();
    let _ = writeln!(s, "problem: {}", r.problem);
    let _ = writeln!(s, "weight: gamma = {}, p = {}, mu = {}, n = {}", num(w.gamma), num(w.p_int), w.mu, w.n);
    let _ = writeln!(s, "weight line: Re z = {}", num(hi));
    let _ = writeln!(s, "strip: {} < Re z < {}, |Im z| <= {}", num(lo), num(hi), num(r.table.imag_box));
    let _ = writeln!(s, "principal symbol: {}", verdict(&r.principal_symbol));
    let _ = writeln!(s, "Shapiro-Lopatinskij: {}", verdict(&r.lopatinskij));
    let _ = writeln!(s, "conormal symbol: {}", verdict(&r.conormal));
    match r.relative_index {
        Some(i) => {
            let _ = writeln!(s, "relative_index = {i}");
        }
        None => {
            let _ = writeln!(s, "relative_index = undetermined");
        }
    }
    let _ = writeln!(s, "minimal domain: {}", r.min_domain);
    let _ = writeln!(s, "maximal domain: {}", r.max_domain);
    let _ = writeln!(s, "singular functions: {}", r.basis.len());
    for (i, f) in r.basis.iter().enumerate() {
        let lower: Vec<String> = f
            .terms
            .iter()
            .filter(|t| t.exponent != f.exponent || t.log_power != f.log_power)
            .map(|t| format!("{} log^{}", complex(t.exponent), t.log_power))
            .collect();
        let _ = write!(s, "  [{i}] omega t^(-q) log^{} t with q = {}", f.log_power, complex(f.exponent));
        if !lower.is_empty() {
            let _ = write!(s, ", lower terms {}", lower.join(", "));
        }
        s.push('\n');
    }
    let _ = writeln!(s, "membership: {}", if r.membership_ok { "PASS" } else { "FAIL" });
    let _ = writeln!(s, "poles of r_0 near the strip: {}", r.table.poles.len());
    for d in &r.table.poles {
        let _ = writeln!(
            s,
            "  p = {}, order {}, rank_M {}, {}",
            complex(d.p),
            d.order,
            d.rank_m,
            if r.table.in_strip(d) { "in strip" } else { "outside" }
        );
    }
    for f in &r.flags {
        let _ = writeln!(s, "flag: {f}");
    }
    if let Some(a) = &r.adjoint {
        let _ = writeln!(s, "adjoint: {a}");
    }
    s
}

pub fn csv_table(r: &DomainReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["re_p", "im_p", "order", "rank_M", "in_strip"]);
    for d in &r.table.poles {
        let _ = w.write_record([
            num(d.p.re),
            num(d.p.im),
            d.order.to_string(),
            d.rank_m.to_string(),
            r.table.in_strip(d).to_string(),
        ]);
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

/// Strip map: the strip lines as vertical lines, poles as circles whose
/// radius grows with `rank_M`, filled when inside the strip.
pub fn svg_map(r: &DomainReport) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const PAD: f64 = 40.0;
    let (lo, hi) = r.weight.strip();
    let x_lo = r.table.poles.iter().map(|d| d.p.re).fold(lo - 1.0, f64::min);
    let x_hi = r.table.poles.iter().map(|d| d.p.re).fold(hi + 1.0, f64::max);
    let y_max = r.table.imag_box.max(1.0);
    let sx = |x: f64| PAD + (x - x_lo) / (x_hi - x_lo) * (W - 2.0 * PAD);
    let sy = |y: f64| H / 2.0 - y / y_max * (H / 2.0 - PAD);
    let f = |v: f64| format!("{v:.3}");
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#e8f0fe"/>"##,
        f(sx(lo)),
        f(sy(y_max)),
        f(sx(hi) - sx(lo)),
        f(sy(-y_max) - sy(y_max))
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-width="1"/>"#,
        f(PAD),
        f(sy(0.0)),
        f(W - PAD),
        f(sy(0.0))
    );
    for (x, dash, label) in [(lo, r#" stroke-dasharray="6 4""#, "gamma + mu"), (hi, "", "gamma")] {
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black" stroke-width="1.5"{dash}/>"#,
            f(sx(x)),
            f(sy(y_max)),
            f(sy(-y_max))
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{label}: Re z = {}</text>"#,
            f(sx(x)),
            f(PAD - 10.0),
            num(x)
        );
    }
    for d in &r.table.poles {
        let fill = if r.table.in_strip(d) { "crimson" } else { "none" };
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}" stroke="crimson" stroke-width="1.5" fill="{fill}"><title>{} order {} rank_M {}</title></circle>"#,
            f(sx(d.p.re)),
            f(sy(d.p.im)),
            f(3.0 + 2.0 * d.rank_m as f64),
            complex(d.p),
            d.order,
            d.rank_m
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">Re z from {} to {}, Im z from {} to {}</text>"#,
        f(W / 2.0),
        f(H - 10.0),
        num(x_lo),
        num(x_hi),
        num(-y_max),
        num(y_max)
    );
    s.push_str("</svg>\n");
    s
}
