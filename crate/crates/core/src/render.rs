//! Grid rasterization of interval images, written as CSV and SVG.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::{classify_pair, AffineBox, ImageClass};
use crate::chart::ChartPoint;
use crate::cyclic::in_r;
use crate::error::{Error, Result};
use crate::full::cube_to_chart;
use crate::jordan::JElem;
use crate::rational::{format_rational, parse_rational, serde_str, to_f64, Rational};

pub const SVG_SIZE: u32 = 512;
const FILL: &str = "#3b6ea5";
const OUTLINE: &str = "#c0392b";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisSpec {
    #[serde(with = "serde_str")]
    pub lo: Rational,
    #[serde(with = "serde_str")]
    pub hi: Rational,
    pub steps: usize,
}

impl AxisSpec {
    /// Cell centers `lo + (hi − lo)(2k + 1) / (2·steps)`.
    pub fn points(&self) -> Vec<Rational> {
        let w = &self.hi - &self.lo;
        let den = Rational::from_integer((2 * self.steps).into());
        (0..self.steps)
            .map(|k| &self.lo + &w * Rational::from_integer((2 * k + 1).into()) / &den)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<AxisSpec>,
}

impl GridSpec {
    /// Parses `"lo:hi:steps"` per axis, axes separated by `;`.
    pub fn parse(s: &str) -> Result<GridSpec> {
        let axes = s
            .split(';')
            .map(|ax| {
                let parts: Vec<&str> = ax.split(':').collect();
                let [lo, hi, steps] = parts[..] else {
                    return Err(Error::Parse(format!("grid axis {ax:?} is not lo:hi:steps")));
                };
                let steps = steps
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad step count {steps:?}")))?;
                Ok(AxisSpec {
                    lo: parse_rational(lo)?,
                    hi: parse_rational(hi)?,
                    steps,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let g = GridSpec { axes };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::UnsupportedProjection(format!(
                "{} grid axes; 1 or 2 supported",
                self.axes.len()
            )));
        }
        for a in &self.axes {
            if a.lo >= a.hi || a.steps == 0 {
                return Err(Error::Parse("grid axis needs lo < hi and steps > 0".into()));
            }
        }
        Ok(())
    }
}

/// Which coordinates of the algebra the grid moves, and the values of the
/// others.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub coords: Vec<usize>,
    pub base: JElem,
    /// Grid values are cube coordinates, sent to the chart by
    /// `t ↦ t / (1 − |t|)`.
    pub cube: bool,
}

impl Slice {
    pub fn new(coords: Vec<usize>, base: JElem) -> Slice {
        Slice {
            coords,
            base,
            cube: false,
        }
    }

    pub fn cube(mut self) -> Slice {
        self.cube = true;
        self
    }

    fn point(&self, values: &[Rational]) -> Result<JElem> {
        let desc = self.base.descriptor();
        let ring = desc.ring();
        let mut c = self.base.coords().to_vec();
        for (&k, v) in self.coords.iter().zip(values) {
            let v = if self.cube {
                cube_to_chart(v)?
            } else {
                v.clone()
            };
            c[k] = ring.from_rational(&v)?;
        }
        desc.from_coords(c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub grid: GridSpec,
    pub coords: Vec<usize>,
    pub class: ImageClass,
    /// Grid values per cell; the first axis varies fastest.
    pub cells: Vec<(Vec<Rational>, bool)>,
}

impl Raster {
    pub fn members(&self) -> usize {
        self.cells.iter().filter(|c| c.1).count()
    }
}

pub fn rasterize(a: &ChartPoint, b: &ChartPoint, grid: &GridSpec, slice: &Slice) -> Result<Raster> {
    grid.validate()?;
    if slice.coords.len() != grid.axes.len() {
        return Err(Error::UnsupportedProjection(
            "slice and grid dimensions differ".into(),
        ));
    }
    let dim = slice.base.descriptor().dim();
    if let Some(k) = slice.coords.iter().find(|&&k| k >= dim) {
        return Err(Error::UnsupportedProjection(format!(
            "coordinate {k} of a {dim}-dimensional algebra"
        )));
    }
    a.same_algebra(b)?;
    if let Some(v) = a.finite().or(b.finite()) {
        v.same_algebra(&slice.base)?;
    }
    let class = classify_pair(a, b)?;
    let pts: Vec<Vec<Rational>> = grid.axes.iter().map(AxisSpec::points).collect();
    let total: usize = pts.iter().map(Vec::len).product();
    let cells = (0..total)
        .into_par_iter()
        .map(|mut k| {
            let mut vals = Vec::with_capacity(pts.len());
            for p in &pts {
                vals.push(p[k % p.len()].clone());
                k /= p.len();
            }
            let x = ChartPoint::Finite(slice.point(&vals)?);
            let m = in_r(a, &x, b)?;
            Ok((vals, m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Raster {
        grid: grid.clone(),
        coords: slice.coords.clone(),
        class,
        cells,
    })
}

pub fn to_csv(r: &Raster) -> String {
    let mut out = String::new();
    for k in &r.coords {
        let _ = write!(out, "c{k},");
    }
    out.push_str("member,class\n");
    for (vals, m) in &r.cells {
        for v in vals {
            let _ = write!(out, "{},", format_rational(v));
        }
        let _ = writeln!(out, "{},{}", u8::from(*m), r.class.letter());
    }
    out
}

fn px(v: &Rational, ax: &AxisSpec) -> f64 {
    to_f64(&((v - &ax.lo) / (&ax.hi - &ax.lo))) * f64::from(SVG_SIZE)
}

/// Member cells as filled rectangles (runs merged along the first axis),
/// optional box outlines on top. The second axis points up.
pub fn to_svg(r: &Raster, boxes: &[AffineBox]) -> String {
    let size = f64::from(SVG_SIZE);
    let nx = r.grid.axes[0].steps;
    let ny = r.grid.axes.get(1).map_or(1, |a| a.steps);
    let (cw, ch) = (size / nx as f64, size / ny as f64);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" fill=\"white\"/>"
    );
    for j in 0..ny {
        let row = &r.cells[j * nx..(j + 1) * nx];
        let y = size - (j + 1) as f64 * ch;
        let mut i = 0;
        while i < nx {
            if !row[i].1 {
                i += 1;
                continue;
            }
            let start = i;
            while i < nx && row[i].1 {
                i += 1;
            }
            let _ = writeln!(
                out,
                "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"{FILL}\"/>",
                start as f64 * cw,
                y,
                (i - start) as f64 * cw,
                ch
            );
        }
    }
    let axes = &r.grid.axes;
    for bx in boxes {
        let x0 = px(&bx.lo[0], &axes[0]);
        let x1 = px(&bx.hi[0], &axes[0]);
        let (y0, y1) = match axes.get(1) {
            Some(ay) if bx.lo.len() > 1 => (size - px(&bx.hi[1], ay), size - px(&bx.lo[1], ay)),
            _ => (0.0, size),
        };
        let _ = writeln!(
            out,
            "<rect x=\"{x0:.3}\" y=\"{y0:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"none\" stroke=\"{OUTLINE}\" stroke-width=\"2\"/>",
            x1 - x0,
            y1 - y0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Rasterizes and writes the SVG and/or CSV files.
pub fn render_image(
    a: &ChartPoint,
    b: &ChartPoint,
    grid: &GridSpec,
    slice: &Slice,
    boxes: &[AffineBox],
    svg: Option<&Path>,
    csv: Option<&Path>,
) -> Result<Raster> {
    let r = rasterize(a, b, grid, slice)?;
    if let Some(p) = svg {
        std::fs::write(p, to_svg(&r, boxes))?;
    }
    if let Some(p) = csv {
        std::fs::write(p, to_csv(&r))?;
    }
    Ok(r)
}
