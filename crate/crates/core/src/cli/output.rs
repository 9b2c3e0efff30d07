//! Report encodings: JSON with fixed precision, CSV tables and SVG plots.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::levelset::LevelCurve;
use crate::spherical::{SpherePoint, SphericalCurve};

/// Round every float in `v` to 12 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let r: f64 = format!("{x:.11e}").parse().expect("formatted float");
            if let Some(m) = serde_json::Number::from_f64(r) {
                *n = m;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with sorted keys and rounded floats; identical inputs give identical bytes.
pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut v = serde_json::to_value(report).map_err(|e| Error::InvalidInput(e.to_string()))?;
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::InvalidInput(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
}

struct Frame {
    min: Complex64,
    max: Complex64,
}

impl Frame {
    fn around<'a>(points: impl Iterator<Item = &'a Complex64>) -> Self {
        let mut min = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut max = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for z in points {
            min = Complex64::new(min.re.min(z.re), min.im.min(z.im));
            max = Complex64::new(max.re.max(z.re), max.im.max(z.im));
        }
        if !min.re.is_finite() {
            return Self {
                min: Complex64::new(-1.0, -1.0),
                max: Complex64::new(1.0, 1.0),
            };
        }
        let span = (max - min).re.max((max - min).im).max(1e-9);
        let pad = 0.1 * span;
        Self {
            min: min - Complex64::new(pad, pad),
            max: max + Complex64::new(pad, pad),
        }
    }

    fn width(&self) -> f64 {
        self.max.re - self.min.re
    }

    fn height(&self) -> f64 {
        self.max.im - self.min.im
    }

    fn stroke(&self) -> f64 {
        0.005 * self.width().max(self.height())
    }

    /// SVG's y axis points down, so imaginary parts are negated.
    fn open(&self, out: &mut String) {
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
            fmt(self.min.re),
            fmt(-self.max.im),
            fmt(self.width()),
            fmt(self.height())
        );
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

fn path_data(runs: &[Vec<Complex64>], closed: bool) -> String {
    let mut d = String::new();
    for run in runs {
        for (k, z) in run.iter().enumerate() {
            let _ = write!(d, "{}{} {} ", if k == 0 { "M" } else { "L" }, fmt(z.re), fmt(-z.im));
        }
        if closed {
            d.push('Z');
        }
    }
    d.trim_end().to_string()
}

/// One closed path per component, touch points as dots.
pub fn level_curve_svg(curve: &LevelCurve) -> String {
    let polylines = curve.polylines();
    let frame = Frame::around(polylines.iter().flatten());
    let stroke = frame.stroke();
    let mut out = String::new();
    frame.open(&mut out);
    for pl in &polylines {
        let _ = writeln!(
            out,
            r#"  <path d="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
            path_data(std::slice::from_ref(pl), true),
            fmt(stroke)
        );
    }
    for t in &curve.touch_points {
        let _ = writeln!(
            out,
            r#"  <circle cx="{}" cy="{}" r="{}" fill="red"/>"#,
            fmt(t.re),
            fmt(-t.im),
            fmt(2.0 * stroke)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Sphere curves drawn as two unit discs: the hemisphere `|z| <= 1` in the
/// `z` chart on the left, the hemisphere `|z| >= 1` in the `1/z` chart
/// (conjugated, so orientation matches a view from outside) on the right.
/// Each component is one path, broken into subpaths where it changes hemisphere.
pub fn spherical_curve_svg(curve: &SphericalCurve) -> String {
    let offset = Complex64::new(2.5, 0.0);
    let place = |p: &SpherePoint| -> (bool, Complex64) {
        match p.plane() {
            Some(z) if z.norm() <= 1.0 => (false, z),
            Some(z) => (true, z.inv().conj() + offset),
            None => (true, offset),
        }
    };
    let frame = Frame {
        min: Complex64::new(-1.2, -1.2),
        max: Complex64::new(3.7, 1.2),
    };
    let stroke = 0.005 * 2.4;
    let mut out = String::new();
    frame.open(&mut out);
    for centre in [0.0, 2.5] {
        let _ = writeln!(
            out,
            r#"  <circle cx="{}" cy="0" r="1" fill="none" stroke="gray" stroke-width="{}"/>"#,
            fmt(centre),
            fmt(stroke / 2.0)
        );
    }
    for comp in &curve.components {
        let mut runs: Vec<Vec<Complex64>> = Vec::new();
        let mut side = None;
        for v in comp.iter().chain(comp.first()) {
            let (upper, z) = place(&v.point);
            if side != Some(upper) {
                runs.push(Vec::new());
                side = Some(upper);
            }
            runs.last_mut().expect("run").push(z);
        }
        let _ = writeln!(
            out,
            r#"  <path d="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
            path_data(&runs, false),
            fmt(stroke)
        );
    }
    for t in &curve.touch_points {
        let (_, z) = place(t);
        let _ = writeln!(
            out,
            r#"  <circle cx="{}" cy="{}" r="{}" fill="red"/>"#,
            fmt(z.re),
            fmt(-z.im),
            fmt(2.0 * stroke)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_to_twelve_digits() {
        let mut v = serde_json::json!({"a": 0.1234567890123456, "b": [1.0, 2], "c": "x"});
        round_floats(&mut v);
        assert_eq!(v["a"].as_f64().unwrap(), 0.123456789012);
        assert_eq!(v["b"][1].as_i64().unwrap(), 2);
    }
}
