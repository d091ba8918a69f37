use std::io::{self, Write};

use super::SectionPoint;

/// Decimal rendering with 17 significant digits, trailing zeros removed
/// (keeping one digit after the point). Exponent form outside
/// `1e-5 ..= 1e17`.
pub fn format_sig17(v: f64) -> String {
    if v == 0.0 {
        return "0.0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
    let sign = if neg { "-" } else { "" };
    if !(-5..=16).contains(&exp) {
        let d = digits.trim_end_matches('0');
        let (head, tail) = d.split_at(1);
        let tail = if tail.is_empty() { "0" } else { tail };
        return format!("{sign}{head}.{tail}e{exp}");
    }
    let (int, frac) = if exp >= 0 {
        let cut = exp as usize + 1;
        (digits[..cut].to_string(), digits[cut..].to_string())
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        ("0".to_string(), format!("{zeros}{digits}"))
    };
    let frac = frac.trim_end_matches('0');
    let frac = if frac.is_empty() { "0" } else { frac };
    format!("{sign}{int}.{frac}")
}

/// CSV with header `crossing_index,q1,p1,direction`.
pub fn emit_csv<W: Write>(points: &[SectionPoint], mut sink: W) -> io::Result<()> {
    writeln!(sink, "crossing_index,q1,p1,direction")?;
    for p in points {
        writeln!(
            sink,
            "{},{},{},{}",
            p.crossing_index,
            format_sig17(p.q1),
            format_sig17(p.p1),
            p.direction
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    pub width: u32,
    pub height: u32,
    pub margin: u32,
    pub point_radius: f64,
    pub title: Option<String>,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            width: 800,
            height: 800,
            margin: 50,
            point_radius: 0.8,
            title: None,
        }
    }
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Scatter plot in the `(q1, p1)` plane with one `<g>` per orbit; bounds
/// are taken from the data with a 5% pad. Each circle also carries its
/// exact coordinates as `data-q1` / `data-p1` (17 significant digits).
pub fn emit_svg<W: Write>(orbits: &[Vec<SectionPoint>], mut sink: W, style: &SvgStyle) -> io::Result<()> {
    let pts = orbits.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        x0 = x0.min(p.q1);
        x1 = x1.max(p.q1);
        y0 = y0.min(p.p1);
        y1 = y1.max(p.p1);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let pad = |lo: f64, hi: f64| {
        let w = (hi - lo).max(1e-9);
        (lo - 0.05 * w, hi + 0.05 * w)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    let m = style.margin as f64;
    let pw = style.width as f64 - 2.0 * m;
    let ph = style.height as f64 - 2.0 * m;
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| m + (y1 - y) / (y1 - y0) * ph;

    writeln!(
        sink,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = style.width,
        h = style.height
    )?;
    writeln!(sink, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    if let Some(t) = &style.title {
        writeln!(
            sink,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
            style.width / 2,
            style.margin / 2,
            escape(t)
        )?;
    }
    writeln!(
        sink,
        r#"<rect x="{m}" y="{m}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    )?;
    // axes through the origin when it is in view
    if x0 < 0.0 && 0.0 < x1 {
        writeln!(
            sink,
            r##"<line x1="{0:.2}" y1="{m}" x2="{0:.2}" y2="{1}" stroke="#bbb"/>"##,
            sx(0.0),
            m + ph
        )?;
    }
    if y0 < 0.0 && 0.0 < y1 {
        writeln!(
            sink,
            r##"<line x1="{m}" y1="{0:.2}" x2="{1}" y2="{0:.2}" stroke="#bbb"/>"##,
            sy(0.0),
            m + pw
        )?;
    }
    let label = |v: f64| format!("{v:.3}");
    writeln!(
        sink,
        r#"<g font-family="sans-serif" font-size="11"><text x="{m}" y="{}">{}</text><text x="{}" y="{}" text-anchor="end">{}</text><text x="{}" y="{}" text-anchor="end">{}</text><text x="{}" y="{}" text-anchor="end">{}</text><text x="{}" y="{}">q1</text><text x="{}" y="{}">p1</text></g>"#,
        m + ph + 15.0,
        label(x0),
        m + pw,
        m + ph + 15.0,
        label(x1),
        m - 4.0,
        m + ph,
        label(y0),
        m - 4.0,
        m + 10.0,
        label(y1),
        m + pw / 2.0,
        m + ph + 30.0,
        m / 4.0,
        m + ph / 2.0
    )?;
    for (i, orbit) in orbits.iter().enumerate() {
        writeln!(
            sink,
            r#"<g id="orbit-{i}" fill="{}">"#,
            PALETTE[i % PALETTE.len()]
        )?;
        for p in orbit {
            writeln!(
                sink,
                r#"<circle cx="{:.3}" cy="{:.3}" r="{}" data-q1="{}" data-p1="{}"/>"#,
                sx(p.q1),
                sy(p.p1),
                style.point_radius,
                format_sig17(p.q1),
                format_sig17(p.p1)
            )?;
        }
        writeln!(sink, "</g>")?;
    }
    writeln!(sink, "</svg>")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_sig17(0.0), "0.0");
        assert_eq!(format_sig17(1.0), "1.0");
        assert_eq!(format_sig17(-0.5), "-0.5");
        assert_eq!(format_sig17(0.1), "0.10000000000000001");
        assert_eq!(format_sig17(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_sig17(2e20), "2.0e20");
        for v in [0.1, 1.0 / 3.0, -2.5e-3, 12345.678, 3e-9, 6.02e23] {
            assert_eq!(format_sig17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        emit_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "crossing_index,q1,p1,direction\n");
        let mut buf = Vec::new();
        let p = SectionPoint {
            crossing_index: 0,
            q1: 0.0,
            p1: 0.0,
            direction: 1,
        };
        emit_csv(&[p], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "crossing_index,q1,p1,direction\n0,0.0,0.0,1\n"
        );
    }

    #[test]
    fn svg_groups() {
        let orbit = |r: f64| -> Vec<SectionPoint> {
            (0..8)
                .map(|k| {
                    let a = k as f64 * std::f64::consts::FRAC_PI_4;
                    SectionPoint {
                        crossing_index: k,
                        q1: r * a.cos(),
                        p1: r * a.sin(),
                        direction: 1,
                    }
                })
                .collect()
        };
        let mut buf = Vec::new();
        emit_svg(&[orbit(0.5), orbit(1.0)], &mut buf, &SvgStyle::default()).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("<svg"));
        assert_eq!(s.matches("<circle").count(), 16);
        assert!(s.contains(r#"id="orbit-1""#));
        assert!(s.contains(r#"data-q1="0.5" data-p1="0.0""#));
        assert!(s.trim_end().ends_with("</svg>"));
    }
}
