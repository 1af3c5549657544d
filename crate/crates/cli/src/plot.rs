use std::fmt::Write;

use paramenv_core::rational::to_f64;
use paramenv_core::{Error, Interval, PwlFunction, Rational, Result};

const MARGIN: f64 = 20.0;

/// SVG polyline of `f` over `range` (or its own domain), with a marker on
/// every breakpoint. The y-axis is fitted to the plotted values.
pub fn emit_plot(
    f: &PwlFunction,
    width: u32,
    height: u32,
    range: Option<&Interval>,
) -> Result<String> {
    let range = range.or(f.domain()).ok_or_else(|| {
        Error::InvalidParameter("unbounded envelope needs an explicit range".into())
    })?;
    if width as f64 <= 2.0 * MARGIN || height as f64 <= 2.0 * MARGIN {
        return Err(Error::InvalidParameter("viewport too small".into()));
    }
    let inner: Vec<&Rational> = f
        .breakpoints()
        .iter()
        .filter(|b| &range.lo < *b && *b < &range.hi)
        .collect();
    let mut xs: Vec<&Rational> = vec![&range.lo];
    xs.extend(inner.iter().copied());
    xs.push(&range.hi);
    let pts: Vec<(f64, f64)> = xs.iter().map(|x| (to_f64(x), to_f64(&f.eval(x)))).collect();

    let (x0, x1) = (to_f64(&range.lo), to_f64(&range.hi));
    let mut y0 = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let mut y1 = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    if y1 <= y0 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let (w, h) = (width as f64, height as f64);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (w - 2.0 * MARGIN);
    let sy = |y: f64| h - MARGIN - (y - y0) / (y1 - y0) * (h - 2.0 * MARGIN);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    )
    .unwrap();
    let line: Vec<String> = pts
        .iter()
        .map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
        .collect();
    writeln!(
        svg,
        r#"<polyline fill="none" stroke="black" stroke-width="1.5" points="{}"/>"#,
        line.join(" ")
    )
    .unwrap();
    for &(x, y) in &pts[1..pts.len() - 1] {
        writeln!(
            svg,
            r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="red"/>"#,
            sx(x),
            sy(y)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
