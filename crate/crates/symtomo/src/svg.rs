//! Minimal SVG writer for 2D diagnostics (section outlines, K_τ families,
//! midcurves). Coordinates are auto-scaled into a fixed viewport.

use std::io::Write;

use crate::Result;

pub(crate) struct SvgPlot {
    polylines: Vec<(Vec<(f64, f64)>, &'static str)>,
}

impl SvgPlot {
    pub fn new() -> Self {
        Self {
            polylines: Vec::new(),
        }
    }

    pub fn polyline(&mut self, pts: Vec<(f64, f64)>, color: &'static str) {
        if pts.len() >= 2 {
            self.polylines.push((pts, color));
        }
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for (pts, _) in &self.polylines {
            for &(x, y) in pts {
                lo_x = lo_x.min(x);
                hi_x = hi_x.max(x);
                lo_y = lo_y.min(y);
                hi_y = hi_y.max(y);
            }
        }
        if self.polylines.is_empty() {
            lo_x = -1.0;
            hi_x = 1.0;
            lo_y = -1.0;
            hi_y = 1.0;
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
        let size = 640.0;
        let margin = 20.0;
        let scale = (size - 2.0 * margin) / span;
        let map = |x: f64, y: f64| {
            (
                margin + (x - lo_x) * scale,
                size - margin - (y - lo_y) * scale,
            )
        };
        writeln!(
            w,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
        )?;
        for (pts, color) in &self.polylines {
            write!(w, "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" points=\"")?;
            for &(x, y) in pts {
                let (px, py) = map(x, y);
                write!(w, "{px:.2},{py:.2} ")?;
            }
            writeln!(w, "\"/>")?;
        }
        writeln!(w, "</svg>")?;
        Ok(())
    }
}
