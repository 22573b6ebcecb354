//! Triangular meshes on rectangles, with tagged boundary edges.
//!
//! Meshes are plain index lists: positively oriented triangles over a vertex
//! array, boundary edges stored with the domain on their left (so the
//! outward normal is the edge direction rotated clockwise), and one material
//! region id per element. The text exchange format is line-oriented:
//! a `nv nt nbe` header, vertex lines `x y`, triangle lines `i j k region`,
//! boundary lines `i j tag`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// Boundary edge labels. The four sides tag rectangle boundaries; `Interface`
/// marks subdomain cuts introduced by decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SideTag {
    Left,
    Right,
    Top,
    Bottom,
    Interface,
}

impl SideTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            SideTag::Left => "left",
            SideTag::Right => "right",
            SideTag::Top => "top",
            SideTag::Bottom => "bottom",
            SideTag::Interface => "interface",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(SideTag::Left),
            "right" => Ok(SideTag::Right),
            "top" => Ok(SideTag::Top),
            "bottom" => Ok(SideTag::Bottom),
            "interface" => Ok(SideTag::Interface),
            other => Err(Error::Config(format!("unknown boundary tag '{other}'"))),
        }
    }

    /// The four rectangle sides, in the serialization order.
    pub const SIDES: [SideTag; 4] = [SideTag::Left, SideTag::Right, SideTag::Top, SideTag::Bottom];
}

/// Oriented boundary edge `v[0] -> v[1]` with the domain on its left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub v: [usize; 2],
    pub tag: SideTag,
}

/// Triangle mesh with boundary tags and per-element regions.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 2]>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Material region id per triangle.
    pub element_region: Vec<usize>,
}

/// Builds a structured triangulation of `x_range x y_range` with `nx x ny`
/// cells, each split along a diagonal whose direction alternates with cell
/// parity. Boundary edges are tagged `left`, `right`, `top`, `bottom`.
pub fn build_rect_mesh(
    nx: usize,
    ny: usize,
    x_range: [f64; 2],
    y_range: [f64; 2],
) -> Result<TriangleMesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::Usage(format!("mesh needs at least one cell per side, got {nx} x {ny}")));
    }
    if !(x_range[0] < x_range[1]) || !(y_range[0] < y_range[1]) {
        return Err(Error::Usage(format!(
            "degenerate mesh range [{}, {}] x [{}, {}]",
            x_range[0], x_range[1], y_range[0], y_range[1]
        )));
    }
    let (hx, hy) = ((x_range[1] - x_range[0]) / nx as f64, (y_range[1] - y_range[0]) / ny as f64);
    let vid = |ix: usize, iy: usize| iy * (nx + 1) + ix;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for iy in 0..=ny {
        for ix in 0..=nx {
            vertices.push([x_range[0] + ix as f64 * hx, y_range[0] + iy as f64 * hy]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            let (v00, v10) = (vid(ix, iy), vid(ix + 1, iy));
            let (v01, v11) = (vid(ix, iy + 1), vid(ix + 1, iy + 1));
            // Alternate the cell diagonal so the mesh has no preferred
            // direction.
            if (ix + iy) % 2 == 0 {
                triangles.push([v00, v10, v11]);
                triangles.push([v00, v11, v01]);
            } else {
                triangles.push([v00, v10, v01]);
                triangles.push([v10, v11, v01]);
            }
        }
    }
    let mut boundary_edges = Vec::with_capacity(2 * (nx + ny));
    for ix in 0..nx {
        boundary_edges.push(BoundaryEdge { v: [vid(ix, 0), vid(ix + 1, 0)], tag: SideTag::Bottom });
    }
    for iy in 0..ny {
        boundary_edges.push(BoundaryEdge { v: [vid(nx, iy), vid(nx, iy + 1)], tag: SideTag::Right });
    }
    for ix in (0..nx).rev() {
        boundary_edges.push(BoundaryEdge { v: [vid(ix + 1, ny), vid(ix, ny)], tag: SideTag::Top });
    }
    for iy in (0..ny).rev() {
        boundary_edges.push(BoundaryEdge { v: [vid(0, iy + 1), vid(0, iy)], tag: SideTag::Left });
    }
    let element_region = vec![0; triangles.len()];
    Ok(TriangleMesh { vertices, triangles, boundary_edges, element_region })
}

impl TriangleMesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Signed area of triangle `t` (positive for CCW orientation).
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        0.5 * ((pb[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (pb[1] - pa[1]))
    }

    pub fn centroid(&self, t: usize) -> [f64; 2] {
        let [a, b, c] = self.triangles[t];
        let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        [(pa[0] + pb[0] + pc[0]) / 3.0, (pa[1] + pb[1] + pc[1]) / 3.0]
    }

    /// Reassigns element regions from a centroid classifier.
    pub fn assign_regions(&mut self, classify: impl Fn([f64; 2]) -> usize) {
        for t in 0..self.triangles.len() {
            self.element_region[t] = classify(self.centroid(t));
        }
    }

    /// Unit outward normal of a boundary edge (edge direction rotated
    /// clockwise; the domain lies on the edge's left).
    pub fn edge_normal(&self, e: &BoundaryEdge) -> [f64; 2] {
        let (a, b) = (self.vertices[e.v[0]], self.vertices[e.v[1]]);
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let len = (dx * dx + dy * dy).sqrt();
        [dy / len, -dx / len]
    }

    pub fn edge_length(&self, e: &BoundaryEdge) -> f64 {
        let (a, b) = (self.vertices[e.v[0]], self.vertices[e.v[1]]);
        ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
    }

    /// The triangle owning each boundary edge (every boundary edge belongs to
    /// exactly one triangle on a valid mesh).
    pub fn boundary_edge_owners(&self) -> Result<Vec<usize>> {
        let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                owner.insert((a, b), t);
            }
        }
        self.boundary_edges
            .iter()
            .map(|e| {
                owner.get(&(e.v[0], e.v[1])).copied().ok_or_else(|| {
                    Error::Usage(format!(
                        "boundary edge ({}, {}) is not a positively oriented triangle edge",
                        e.v[0], e.v[1]
                    ))
                })
            })
            .collect()
    }

    /// Checks orientation, nondegeneracy, index ranges, and that every
    /// boundary edge is owned by exactly one triangle.
    pub fn validate(&self) -> Result<()> {
        if self.element_region.len() != self.triangles.len() {
            return Err(Error::Usage("element_region length mismatch".into()));
        }
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= self.vertices.len()) {
                return Err(Error::Usage(format!("triangle {t} references a missing vertex")));
            }
            if !(self.signed_area(t) > 0.0) {
                return Err(Error::Usage(format!(
                    "triangle {t} is degenerate or negatively oriented"
                )));
            }
        }
        let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in &self.triangles {
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                *edge_count.entry(key).or_insert(0) += 1;
            }
        }
        for e in &self.boundary_edges {
            if e.v[0] >= self.vertices.len() || e.v[1] >= self.vertices.len() {
                return Err(Error::Usage("boundary edge references a missing vertex".into()));
            }
            let key = (e.v[0].min(e.v[1]), e.v[0].max(e.v[1]));
            if edge_count.get(&key) != Some(&1) {
                return Err(Error::Usage(format!(
                    "boundary edge ({}, {}) does not belong to exactly one triangle",
                    e.v[0], e.v[1]
                )));
            }
        }
        Ok(())
    }

    /// Serializes the mesh in the text exchange format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {}",
            self.vertices.len(),
            self.triangles.len(),
            self.boundary_edges.len()
        );
        for v in &self.vertices {
            let _ = writeln!(out, "{:.16e} {:.16e}", v[0], v[1]);
        }
        for (tri, region) in self.triangles.iter().zip(&self.element_region) {
            let _ = writeln!(out, "{} {} {} {}", tri[0], tri[1], tri[2], region);
        }
        for e in &self.boundary_edges {
            let _ = writeln!(out, "{} {} {}", e.v[0], e.v[1], e.tag.as_str());
        }
        out
    }

    /// Parses the text exchange format.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |what: &str| Error::Config(format!("mesh text: {what}"));
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let counts: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("unparsable header")))
            .collect::<Result<_>>()?;
        let [nv, nt, nbe] = counts[..] else {
            return Err(bad("header must be 'nv nt nbe'"));
        };
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let line = lines.next().ok_or_else(|| bad("missing vertex line"))?;
            let xy: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("unparsable vertex")))
                .collect::<Result<_>>()?;
            let [x, y] = xy[..] else { return Err(bad("vertex line must be 'x y'")) };
            vertices.push([x, y]);
        }
        let mut triangles = Vec::with_capacity(nt);
        let mut element_region = Vec::with_capacity(nt);
        for _ in 0..nt {
            let line = lines.next().ok_or_else(|| bad("missing triangle line"))?;
            let f: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("unparsable triangle")))
                .collect::<Result<_>>()?;
            let [i, j, k, region] = f[..] else {
                return Err(bad("triangle line must be 'i j k region'"));
            };
            triangles.push([i, j, k]);
            element_region.push(region);
        }
        let mut boundary_edges = Vec::with_capacity(nbe);
        for _ in 0..nbe {
            let line = lines.next().ok_or_else(|| bad("missing boundary line"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            let [i, j, tag] = f[..] else { return Err(bad("boundary line must be 'i j tag'")) };
            boundary_edges.push(BoundaryEdge {
                v: [
                    i.parse().map_err(|_| bad("unparsable boundary index"))?,
                    j.parse().map_err(|_| bad("unparsable boundary index"))?,
                ],
                tag: SideTag::parse(tag)?,
            });
        }
        if lines.next().is_some() {
            return Err(bad("trailing content"));
        }
        let mesh = TriangleMesh { vertices, triangles, boundary_edges, element_region };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn write_text(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_text(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cell_mesh() {
        let m = build_rect_mesh(1, 1, [0.0, 1.0], [0.0, 1.0]).unwrap();
        assert_eq!(m.n_vertices(), 4);
        assert_eq!(m.n_triangles(), 2);
        assert_eq!(m.boundary_edges.len(), 4);
        m.validate().unwrap();
    }

    #[test]
    fn uniform_areas() {
        let m = build_rect_mesh(2, 1, [0.0, 2.0], [0.0, 1.0]).unwrap();
        for t in 0..m.n_triangles() {
            assert!((m.signed_area(t) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn mesh_size_80() {
        let m = build_rect_mesh(80, 80, [0.0, 1.0], [0.0, 1.0]).unwrap();
        assert_eq!(m.n_vertices(), 81 * 81);
        let e = &m.boundary_edges[0];
        assert!((m.edge_length(e) - 1.0 / 80.0).abs() < 1e-15);
        m.validate().unwrap();
    }

    #[test]
    fn outward_normals_on_all_sides() {
        let m = build_rect_mesh(3, 2, [-1.0, 1.0], [0.0, 1.0]).unwrap();
        for e in &m.boundary_edges {
            let n = m.edge_normal(e);
            let expect = match e.tag {
                SideTag::Bottom => [0.0, -1.0],
                SideTag::Right => [1.0, 0.0],
                SideTag::Top => [0.0, 1.0],
                SideTag::Left => [-1.0, 0.0],
                SideTag::Interface => unreachable!(),
            };
            assert!((n[0] - expect[0]).abs() < 1e-15 && (n[1] - expect[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn boundary_edges_have_owners() {
        let m = build_rect_mesh(4, 3, [0.0, 1.0], [0.0, 1.0]).unwrap();
        let owners = m.boundary_edge_owners().unwrap();
        assert_eq!(owners.len(), m.boundary_edges.len());
    }

    #[test]
    fn region_assignment_by_centroid() {
        let mut m = build_rect_mesh(8, 8, [-1.0, 1.0], [-1.0, 1.0]).unwrap();
        m.assign_regions(|c| usize::from(c[0] * c[0] + c[1] * c[1] < 0.25));
        assert!(m.element_region.iter().any(|&r| r == 0));
        assert!(m.element_region.iter().any(|&r| r == 1));
        m.validate().unwrap();
    }

    #[test]
    fn text_round_trip() {
        let mut m = build_rect_mesh(3, 2, [0.0, 1.5], [0.0, 1.0]).unwrap();
        m.assign_regions(|c| usize::from(c[0] > 0.75));
        let text = m.to_text();
        let back = TriangleMesh::from_text(&text).unwrap();
        assert_eq!(m, back);
        let header: Vec<_> = text.lines().next().unwrap().split(' ').collect();
        assert_eq!(header, vec!["12", "12", "10"]);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(build_rect_mesh(0, 1, [0.0, 1.0], [0.0, 1.0]).is_err());
        assert!(build_rect_mesh(1, 1, [1.0, 1.0], [0.0, 1.0]).is_err());
        // Collinear triangle.
        assert!(TriangleMesh::from_text("3 1 0\n0 0\n1 0\n2 0\n0 1 2 0\n").is_err());
        // Clockwise triangle.
        assert!(TriangleMesh::from_text("3 1 0\n0 0\n1 0\n0 1\n0 2 1 0\n").is_err());
    }
}
