//! Minimal SVG figure writer: axes, polylines and scatter points only.

use std::fmt::Write;

pub struct Plot {
    width: f64,
    height: f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    body: String,
}

const MARGIN: f64 = 40.0;

impl Plot {
    pub fn new(width: f64, height: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Plot {
            width,
            height,
            x0,
            x1,
            y0,
            y1,
            body: String::new(),
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (self.width - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        self.height - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (self.height - 2.0 * MARGIN)
    }

    pub fn axes(&mut self) {
        let (l, r) = (self.px(self.x0), self.px(self.x1));
        let zero_y = self.py(0.0);
        let _ = write!(
            self.body,
            r##"<line x1="{l:.1}" y1="{zero_y:.1}" x2="{r:.1}" y2="{zero_y:.1}" stroke="#333" stroke-width="1"/>"##
        );
        // x ticks at integers
        let mut x = self.x0.ceil();
        while x <= self.x1 {
            let px = self.px(x);
            let _ = write!(
                self.body,
                r##"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="#333" stroke-width="1"/><text x="{px:.1}" y="{:.1}" font-size="10" text-anchor="middle">{x}</text>"##,
                zero_y - 3.0,
                zero_y + 3.0,
                zero_y + 14.0,
            );
            x += 1.0;
        }
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str) {
        if pts.is_empty() {
            return;
        }
        let mut d = String::new();
        for (x, y) in pts {
            let _ = write!(d, "{:.1},{:.1} ", self.px(*x), self.py(*y));
        }
        let _ = write!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.2"/>"#,
            d.trim_end()
        );
    }

    pub fn points(&mut self, pts: &[(f64, f64)], radius: f64, color: &str) {
        for (x, y) in pts {
            let _ = write!(
                self.body,
                r#"<circle cx="{:.1}" cy="{:.1}" r="{radius}" fill="{color}"/>"#,
                self.px(*x),
                self.py(*y)
            );
        }
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}\n</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}
