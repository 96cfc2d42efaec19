//! World-to-window mapping and rasterisation of point clouds.
//!
//! Window coordinates put the origin at the top-left corner with x growing
//! to the right and y growing downward. Pixel `(i, j)` covers
//! `[i, i+1) × [j, j+1)` in window units, so a point lands in pixel
//! `(floor(u), floor(v))`: the nearest pixel centre, with exact halfway
//! cases going to the larger index.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::barycentric::AffineBasis;
use crate::point::{Point2, PointSet};
use crate::simplex::Box2;

/// Minimum world extent given to a flat box before fitting it.
const MIN_EXTENT: f64 = 1e-9;

pub const BACKGROUND: [u8; 3] = [255, 255, 255];
pub const FOREGROUND: [u8; 3] = [0, 0, 0];
pub const TRIANGLE_COLOR: [u8; 3] = [220, 30, 30];
pub const HANDLE_COLOR: [u8; 3] = [30, 60, 220];
/// Vertex handles are `2 * HANDLE_HALF + 1` pixels square.
pub const HANDLE_HALF: i64 = 2;

/// Fixed camera: a world box fitted into a pixel raster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    world: Box2,
    width: u32,
    height: u32,
    margin_frac: f64,
    scale: f64,
    offset_x: f64,
    offset_y: f64,
}

impl Viewport {
    /// Fits `world` inside a `width × height` raster with a uniform scale,
    /// leaving `margin_frac` of each dimension free on both sides and
    /// centring the slack. Flat boxes are padded to a tiny positive extent;
    /// `margin_frac` is clamped to `[0, 0.45]`, dimensions to at least 1.
    pub fn new(world: Box2, width: u32, height: u32, margin_frac: f64) -> Self {
        let world = pad_flat(world);
        let width = width.max(1);
        let height = height.max(1);
        let margin_frac = if margin_frac.is_finite() {
            margin_frac.clamp(0.0, 0.45)
        } else {
            0.0
        };
        let usable_w = width as f64 * (1.0 - 2.0 * margin_frac);
        let usable_h = height as f64 * (1.0 - 2.0 * margin_frac);
        let scale = (usable_w / world.width()).min(usable_h / world.height());
        let offset_x = 0.5 * (width as f64 - scale * world.width());
        let offset_y = 0.5 * (height as f64 - scale * world.height());
        Self {
            world,
            width,
            height,
            margin_frac,
            scale,
            offset_x,
            offset_y,
        }
    }

    /// Camera framing the points and triangle with 5% padding on each side.
    pub fn fit(points: &PointSet, basis: Option<&AffineBasis>, width: u32, height: u32) -> Self {
        let mut bbox: Option<Box2> = None;
        let corners = basis.into_iter().flat_map(|b| b.vertices());
        for p in points.iter().copied().chain(corners) {
            match bbox.as_mut() {
                Some(b) => b.include(p),
                None => bbox = Box2::new(p.x, p.y, p.x, p.y),
            }
        }
        let bbox = bbox.unwrap_or(Box2 {
            xmin: -1.0,
            ymin: -1.0,
            xmax: 1.0,
            ymax: 1.0,
        });
        Self::new(pad_flat(bbox).expanded(0.05), width, height, 0.0)
    }

    pub fn world_box(&self) -> Box2 {
        self.world
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn margin_frac(&self) -> f64 {
        self.margin_frac
    }

    /// Window units per world unit.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    pub fn world_to_window(&self, p: Point2) -> Point2 {
        Point2::new(
            self.offset_x + (p.x - self.world.xmin) * self.scale,
            self.offset_y + (self.world.ymax - p.y) * self.scale,
        )
    }

    #[inline]
    pub fn window_to_world(&self, w: Point2) -> Point2 {
        Point2::new(
            self.world.xmin + (w.x - self.offset_x) / self.scale,
            self.world.ymax - (w.y - self.offset_y) / self.scale,
        )
    }

    /// Pixel holding `p`, or `None` outside the raster.
    #[inline]
    pub fn pixel_of(&self, p: Point2) -> Option<(u32, u32)> {
        let w = self.world_to_window(p);
        let (i, j) = (w.x.floor(), w.y.floor());
        (i >= 0.0 && j >= 0.0 && i < self.width as f64 && j < self.height as f64)
            .then_some((i as u32, j as u32))
    }
}

fn pad_flat(mut b: Box2) -> Box2 {
    let pad = |lo: &mut f64, hi: &mut f64| {
        if *hi - *lo < MIN_EXTENT {
            let half = 0.5 * MIN_EXTENT.max(lo.abs().max(hi.abs()) * 1e-6);
            let mid = 0.5 * (*lo + *hi);
            *lo = mid - half;
            *hi = mid + half;
        }
    };
    pad(&mut b.xmin, &mut b.xmax);
    pad(&mut b.ymin, &mut b.ymax);
    b
}

/// 8-bit RGB raster, row-major from the top-left pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn filled(width: u32, height: u32, color: [u8; 3]) -> Self {
        let n = width as usize * height as usize;
        let mut data = Vec::with_capacity(n * 3);
        for _ in 0..n {
            data.extend_from_slice(&color);
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn put(&mut self, x: u32, y: u32, color: [u8; 3]) {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        self.data[i..i + 3].copy_from_slice(&color);
    }

    fn put_signed(&mut self, x: i64, y: i64, color: [u8; 3]) {
        if x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64 {
            self.put(x as u32, y as u32, color);
        }
    }

    /// Pixels not equal to `color`.
    pub fn count_not(&self, color: [u8; 3]) -> usize {
        self.data.chunks_exact(3).filter(|px| *px != color).count()
    }

    /// Binary PPM: `P6\n<w> <h>\n255\n` followed by the RGB bytes.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    pub fn write_ppm(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_ppm())
    }

    /// Reads back a binary PPM as written by [`RgbImage::to_ppm`].
    pub fn from_ppm(bytes: &[u8]) -> Option<Self> {
        let mut fields = Vec::with_capacity(4);
        let mut pos = 0;
        while fields.len() < 4 {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return None;
            }
            fields.push(std::str::from_utf8(&bytes[start..pos]).ok()?);
        }
        if fields[0] != "P6" || fields[3] != "255" {
            return None;
        }
        let width: u32 = fields[1].parse().ok()?;
        let height: u32 = fields[2].parse().ok()?;
        let data = bytes.get(pos + 1..)?.to_vec();
        (data.len() == width as usize * height as usize * 3).then_some(Self { width, height, data })
    }
}

/// Integer Bresenham segment, endpoints inclusive.
fn draw_line(img: &mut RgbImage, from: (i64, i64), to: (i64, i64), color: [u8; 3]) {
    let (mut x, mut y) = from;
    let dx = (to.0 - x).abs();
    let dy = -(to.1 - y).abs();
    let sx = if x < to.0 { 1 } else { -1 };
    let sy = if y < to.1 { 1 } else { -1 };
    let mut err = dx + dy;
    // Bound the walk so absurd off-screen coordinates cannot stall a frame.
    let limit = (dx - dy).min(4 * (img.width as i64 + img.height as i64) + 16);
    for _ in 0..=limit {
        img.put_signed(x, y, color);
        if (x, y) == to {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

fn clamp_window(vp: &Viewport, p: Point2) -> (i64, i64) {
    let w = vp.world_to_window(p);
    let bound = 4.0 * (vp.width.max(vp.height) as f64) + 16.0;
    (
        w.x.floor().clamp(-bound, bound) as i64,
        w.y.floor().clamp(-bound, bound) as i64,
    )
}

/// Draws every point as one foreground pixel on a white raster, then the
/// control triangle (1px edges, square vertex handles) on top.
pub fn rasterize(points: &PointSet, basis: Option<&AffineBasis>, vp: &Viewport) -> RgbImage {
    let mut img = RgbImage::filled(vp.width, vp.height, BACKGROUND);
    for p in points.iter() {
        if let Some((x, y)) = vp.pixel_of(*p) {
            img.put(x, y, FOREGROUND);
        }
    }
    if let Some(b) = basis {
        let corners = b.vertices().map(|v| clamp_window(vp, v));
        for k in 0..3 {
            draw_line(&mut img, corners[k], corners[(k + 1) % 3], TRIANGLE_COLOR);
        }
        for (cx, cy) in corners {
            for dy in -HANDLE_HALF..=HANDLE_HALF {
                for dx in -HANDLE_HALF..=HANDLE_HALF {
                    img.put_signed(cx + dx, cy + dy, HANDLE_COLOR);
                }
            }
        }
    }
    img
}

fn hex(c: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// SVG rendering: one 0.5px `<circle>` per point plus the triangle overlay.
pub fn render_svg(points: &PointSet, basis: Option<&AffineBasis>, vp: &Viewport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = vp.width,
        h = vp.height
    );
    let _ = writeln!(
        out,
        r#"<rect width="100%" height="100%" fill="{}"/>"#,
        hex(BACKGROUND)
    );
    let _ = writeln!(out, r#"<g fill="{}">"#, hex(FOREGROUND));
    for p in points.iter() {
        let w = vp.world_to_window(*p);
        let _ = writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="0.5"/>"#, w.x, w.y);
    }
    out.push_str("</g>\n");
    if let Some(b) = basis {
        let corners = b.vertices().map(|v| vp.world_to_window(v));
        let pts: Vec<String> = corners.iter().map(|c| format!("{:.3},{:.3}", c.x, c.y)).collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="none" stroke="{}" stroke-width="1"/>"#,
            pts.join(" "),
            hex(TRIANGLE_COLOR)
        );
        let side = (2 * HANDLE_HALF + 1) as f64;
        for c in corners {
            let _ = writeln!(
                out,
                r#"<rect x="{:.3}" y="{:.3}" width="{side}" height="{side}" fill="{}"/>"#,
                c.x - side / 2.0,
                c.y - side / 2.0,
                hex(HANDLE_COLOR)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
