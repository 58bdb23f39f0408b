//! Triangular meshes of convex polygons.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use spade::{AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};

use crate::error::{Error, Result};
use crate::geometry::calipers;
use crate::geometry::polygon::{cross, ConvexPolygon, Vec2};

/// Smallest and largest accepted target element size.
pub const MIN_TARGET_H: f64 = 1e-3;
pub const MAX_TARGET_H: f64 = 0.2;
/// Meshes (including the refinement used for error estimates) may not exceed this many nodes.
pub const NODE_BUDGET: usize = 200_000;
/// Quality target for the Delaunay refinement.
pub const ANGLE_LIMIT_DEG: f64 = 25.0;
/// Minimum angle guaranteed away from input corners sharper than this; no
/// triangulation can do better at such a corner.
pub const MIN_ANGLE_DEG: f64 = 15.0;
/// Element layers across the width of a thin body.
pub const MIN_LAYERS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryTag {
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    /// Index of the polygon edge containing this mesh edge.
    pub side: usize,
    pub tag: BoundaryTag,
}

/// Conforming triangulation with positively oriented triangles.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub nodes: Vec<Vec2>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<BoundaryEdge>,
    /// Longest edge length.
    pub h_mesh: f64,
    pub polygon: ConvexPolygon,
}

/// Summary of element quality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshQuality {
    /// Smallest angle over all triangles, in degrees.
    pub min_angle: f64,
    /// Smallest angle over triangles away from polygon corners sharper than [`MIN_ANGLE_DEG`].
    /// Near a corner of angle `θ` the body is narrower than one element within
    /// distance `h_mesh / tan θ`; triangles centred there are excluded.
    pub min_angle_regular: f64,
    pub min_area: f64,
    pub triangles: usize,
    pub nodes: usize,
}

fn tri_area(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    0.5 * cross(b - a, c - a)
}

fn angles(a: Vec2, b: Vec2, c: Vec2) -> [f64; 3] {
    let ang = |p: Vec2, q: Vec2, r: Vec2| {
        let u = q - p;
        let v = r - p;
        cross(u, v).abs().atan2(u.dot(&v))
    };
    [ang(a, b, c), ang(b, c, a), ang(c, a, b)]
}

/// Element size used for a body: the target, reduced so that at least
/// [`MIN_LAYERS`] elements span the width.
pub fn effective_size(poly: &ConvexPolygon, target_h: f64) -> f64 {
    target_h.min(calipers::width(poly).length / MIN_LAYERS)
}

/// Delaunay-refined triangulation of a convex polygon with elements of size about `target_h`.
pub fn triangulate(poly: &ConvexPolygon, target_h: f64) -> Result<TriMesh> {
    if !(MIN_TARGET_H..=MAX_TARGET_H).contains(&target_h) {
        return Err(Error::OutOfRange(format!(
            "target_h {target_h} outside [{MIN_TARGET_H}, {MAX_TARGET_H}]"
        )));
    }
    let s = effective_size(poly, target_h);
    let tri_area_target = 3f64.sqrt() / 4.0 * s * s;
    // estimated nodes after one uniform refinement
    let estimate = 4.0 * poly.area() / tri_area_target / 2.0 + 2.0 * poly.perimeter() / s;
    if estimate > NODE_BUDGET as f64 {
        return Err(Error::Mesh(format!(
            "element size {s:.3e} needs about {estimate:.0} nodes, above the budget of {NODE_BUDGET}"
        )));
    }

    let mut points = Vec::new();
    let mut edges = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        let pieces = ((b - a).norm() / s).ceil().max(1.0) as usize;
        for j in 0..pieces {
            let p = a + (b - a) * (j as f64 / pieces as f64);
            points.push(Point2::new(p.x, p.y));
        }
    }
    // incremental insertion: bulk loading re-inserts skipped vertices in hash order,
    // which makes the mesh differ between processes
    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> = ConstrainedDelaunayTriangulation::new();
    for p in points {
        let v = cdt
            .insert(p)
            .map_err(|e| Error::Mesh(format!("constrained triangulation failed: {e:?}")))?;
        edges.push(v);
    }
    for i in 0..edges.len() {
        let (a, b) = (edges[i], edges[(i + 1) % edges.len()]);
        if a != b && !cdt.add_constraint(a, b) && !cdt.exists_constraint(a, b) {
            return Err(Error::Mesh(format!("boundary constraint {i} could not be inserted")));
        }
    }
    let params = RefinementParameters::<f64>::new()
        .exclude_outer_faces(true)
        .with_angle_limit(AngleLimit::from_deg(ANGLE_LIMIT_DEG))
        .with_max_allowed_area(tri_area_target)
        .with_min_required_area(tri_area_target * 1e-4)
        .with_max_additional_vertices(NODE_BUDGET);
    let result = cdt.refine(params);
    if !result.refinement_complete {
        return Err(Error::Mesh("Delaunay refinement exhausted its vertex budget".into()));
    }

    // faces outside the constraint loop (slivers from rounding of collinear boundary points)
    let outer: std::collections::HashSet<_> = result.excluded_faces.iter().copied().collect();
    let mut index = vec![usize::MAX; cdt.num_vertices()];
    let mut nodes = Vec::new();
    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        if outer.contains(&face.fix()) {
            continue;
        }
        let vs = face.vertices();
        let mut tri = [0usize; 3];
        for (k, v) in vs.iter().enumerate() {
            let id = v.fix().index();
            if index[id] == usize::MAX {
                index[id] = nodes.len();
                let p = v.position();
                nodes.push(Vec2::new(p.x, p.y));
            }
            tri[k] = index[id];
        }
        let area = tri_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
        if area < 0.0 {
            tri.swap(1, 2);
        }
        triangles.push(tri);
    }
    TriMesh::from_parts(nodes, triangles, poly.clone())
}

impl TriMesh {
    /// Builds a mesh from nodes and triangles, deriving and tagging boundary edges (all Neumann).
    pub fn from_parts(
        nodes: Vec<Vec2>,
        triangles: Vec<[usize; 3]>,
        polygon: ConvexPolygon,
    ) -> Result<Self> {
        let mut count: HashMap<(usize, usize), (usize, [usize; 2])> = HashMap::new();
        for t in &triangles {
            if tri_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]) <= 0.0 {
                return Err(Error::Mesh(format!("inverted or degenerate triangle {t:?}")));
            }
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let e = count.entry((a.min(b), a.max(b))).or_insert((0, [a, b]));
                e.0 += 1;
            }
        }
        let mut boundary = Vec::new();
        for t in &triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let (c, dir) = count[&(a.min(b), a.max(b))];
                if c == 1 && dir == [a, b] {
                    let side = locate_side(&polygon, nodes[a], nodes[b])?;
                    boundary.push(BoundaryEdge {
                        nodes: [a, b],
                        side,
                        tag: BoundaryTag::Neumann,
                    });
                } else if c > 2 {
                    return Err(Error::Mesh(format!("non-manifold edge ({a}, {b})")));
                }
            }
        }
        let h_mesh = triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| (nodes[a] - nodes[b]).norm())
            .fold(0.0, f64::max);
        Ok(Self {
            nodes,
            triangles,
            boundary,
            h_mesh,
            polygon,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| tri_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]))
            .sum()
    }

    pub fn vertices_of(&self, t: usize) -> [Vec2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    /// Uniform red refinement: each triangle is split into four similar ones.
    /// Existing nodes keep their indices.
    pub fn refine(&self) -> Result<TriMesh> {
        Ok(self.refine_with_parents()?.0)
    }

    /// As [`TriMesh::refine`], also returning the edge endpoints of every new node
    /// (new node `num_nodes() + i` is the midpoint of `parents[i]`).
    pub fn refine_with_parents(&self) -> Result<(TriMesh, Vec<[usize; 2]>)> {
        let mut nodes = self.nodes.clone();
        let mut parents = Vec::new();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<Vec2>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                nodes.push((nodes[a] + nodes[b]) * 0.5);
                parents.push([a, b]);
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut nodes);
            let bc = midpoint(b, c, &mut nodes);
            let ca = midpoint(c, a, &mut nodes);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        if nodes.len() > NODE_BUDGET {
            return Err(Error::Mesh(format!(
                "refined mesh has {} nodes, above the budget of {NODE_BUDGET}",
                nodes.len()
            )));
        }
        let mut refined = TriMesh::from_parts(nodes, triangles, self.polygon.clone())?;
        refined.set_dirichlet_sides(&self.dirichlet_sides());
        Ok((refined, parents))
    }

    /// Polygon sides currently tagged Dirichlet.
    pub fn dirichlet_sides(&self) -> Vec<usize> {
        let mut sides: Vec<usize> = self
            .boundary
            .iter()
            .filter(|e| e.tag == BoundaryTag::Dirichlet)
            .map(|e| e.side)
            .collect();
        sides.sort_unstable();
        sides.dedup();
        sides
    }

    /// Tags every boundary edge on the listed polygon sides as Dirichlet and the rest as Neumann.
    pub fn set_dirichlet_sides(&mut self, sides: &[usize]) {
        for e in &mut self.boundary {
            e.tag = if sides.contains(&e.side) {
                BoundaryTag::Dirichlet
            } else {
                BoundaryTag::Neumann
            };
        }
    }

    /// Tags as Dirichlet the polygon sides whose outward normal satisfies `pred`.
    pub fn set_dirichlet_where(&mut self, pred: impl Fn(Vec2) -> bool) {
        let sides: Vec<usize> = (0..self.polygon.len())
            .filter(|&i| pred(self.polygon.edge_normal(i)))
            .collect();
        self.set_dirichlet_sides(&sides);
    }

    /// Nodes lying on a Dirichlet edge.
    pub fn dirichlet_nodes(&self) -> Vec<bool> {
        let mut fixed = vec![false; self.nodes.len()];
        for e in &self.boundary {
            if e.tag == BoundaryTag::Dirichlet {
                fixed[e.nodes[0]] = true;
                fixed[e.nodes[1]] = true;
            }
        }
        fixed
    }

    pub fn quality(&self) -> MeshQuality {
        // (corner, radius of the region where the body is narrower than one element)
        let sharp: Vec<(Vec2, f64)> = (0..self.polygon.len())
            .filter(|&i| self.polygon.interior_angle(i).to_degrees() < MIN_ANGLE_DEG)
            .map(|i| {
                let r = self.h_mesh / self.polygon.interior_angle(i).tan();
                (self.polygon.vertices()[i], r)
            })
            .collect();
        let mut q = MeshQuality {
            min_angle: f64::INFINITY,
            min_angle_regular: f64::INFINITY,
            min_area: f64::INFINITY,
            triangles: self.triangles.len(),
            nodes: self.nodes.len(),
        };
        for t in 0..self.triangles.len() {
            let [a, b, c] = self.vertices_of(t);
            let m = angles(a, b, c).into_iter().fold(f64::INFINITY, f64::min).to_degrees();
            q.min_angle = q.min_angle.min(m);
            q.min_area = q.min_area.min(tri_area(a, b, c));
            let centroid = (a + b + c) / 3.0;
            let near_sharp = sharp.iter().any(|(s, r)| (centroid - s).norm() <= *r);
            if !near_sharp {
                q.min_angle_regular = q.min_angle_regular.min(m);
            }
        }
        q
    }

    /// Checks that boundary edges form one closed loop whose length is the polygon perimeter.
    pub fn check_boundary(&self) -> Result<()> {
        let mut next: HashMap<usize, usize> = HashMap::new();
        for e in &self.boundary {
            if next.insert(e.nodes[0], e.nodes[1]).is_some() {
                return Err(Error::Mesh(format!("boundary branches at node {}", e.nodes[0])));
            }
        }
        let start = self.boundary[0].nodes[0];
        let mut v = start;
        let mut steps = 0;
        let mut length = 0.0;
        loop {
            let w = *next
                .get(&v)
                .ok_or_else(|| Error::Mesh(format!("boundary loop open at node {v}")))?;
            length += (self.nodes[w] - self.nodes[v]).norm();
            v = w;
            steps += 1;
            if v == start {
                break;
            }
            if steps > self.boundary.len() {
                return Err(Error::Mesh("boundary loop does not close".into()));
            }
        }
        if steps != self.boundary.len() {
            return Err(Error::Mesh("boundary consists of several loops".into()));
        }
        let per = self.polygon.perimeter();
        if (length - per).abs() > 1e-9 * per {
            return Err(Error::Mesh(format!(
                "boundary length {length} differs from perimeter {per}"
            )));
        }
        Ok(())
    }

    /// Text dump:
    ///
    /// ```text
    /// # thinspec mesh v1
    /// nodes N
    /// x y                      (N lines)
    /// triangles T
    /// i j k                    (T lines, 0-based, counter-clockwise)
    /// boundary B
    /// i j side tag             (B lines, tag is neumann or dirichlet)
    /// ```
    pub fn dump(&self) -> String {
        let mut s = String::from("# thinspec mesh v1\n");
        let _ = writeln!(s, "nodes {}", self.nodes.len());
        for p in &self.nodes {
            let _ = writeln!(s, "{:.17e} {:.17e}", p.x, p.y);
        }
        let _ = writeln!(s, "triangles {}", self.triangles.len());
        for t in &self.triangles {
            let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
        }
        let _ = writeln!(s, "boundary {}", self.boundary.len());
        for e in &self.boundary {
            let tag = match e.tag {
                BoundaryTag::Neumann => "neumann",
                BoundaryTag::Dirichlet => "dirichlet",
            };
            let _ = writeln!(s, "{} {} {} {tag}", e.nodes[0], e.nodes[1], e.side);
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.dump()).map_err(|e| Error::io(path, e))
    }
}

/// Polygon side containing the segment `[p, q]`.
fn locate_side(poly: &ConvexPolygon, p: Vec2, q: Vec2) -> Result<usize> {
    let m = (p + q) * 0.5;
    let scale = poly.perimeter();
    let mut best = (f64::INFINITY, 0usize);
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        let d = (b - a).normalize();
        let dist = |x: Vec2| cross(d, x - a).abs();
        let t = (m - a).dot(&d) / (b - a).norm();
        let off = dist(p).max(dist(q));
        if (-1e-9..=1.0 + 1e-9).contains(&t) && off < best.0 {
            best = (off, i);
        }
    }
    if best.0 > 1e-9 * scale {
        return Err(Error::Mesh(format!(
            "boundary edge at ({}, {}) does not lie on the polygon",
            m.x, m.y
        )));
    }
    Ok(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;

    #[test]
    fn unit_square_mesh() {
        let m = triangulate(&shapes::rectangle(1.0, 1.0), 0.05).unwrap();
        m.check_boundary().unwrap();
        assert!((m.area() - 1.0).abs() < 1e-12);
        let q = m.quality();
        assert!(q.min_angle >= MIN_ANGLE_DEG, "{q:?}");
        assert!((400..2000).contains(&m.triangles.len()), "{}", m.triangles.len());
    }

    #[test]
    fn thin_triangle_quality_away_from_tip() {
        let m = triangulate(&shapes::triangle([0.0, 0.0], [1.0, 0.0], [1.0, 0.05]), 0.05).unwrap();
        let q = m.quality();
        assert!(q.min_angle_regular >= MIN_ANGLE_DEG, "{q:?}");
        assert!(q.min_angle < MIN_ANGLE_DEG);
        let r = m.refine().unwrap().quality();
        assert!(r.min_angle_regular >= MIN_ANGLE_DEG, "{r:?}");
    }

    #[test]
    fn thin_rectangle_layers() {
        let m = triangulate(&shapes::rectangle(1.0, 0.05), 0.0125).unwrap();
        m.check_boundary().unwrap();
        // nodes strictly inside, on the vertical line x = 0.5 region, span at least 4 layers
        let mut ys: Vec<f64> = m
            .nodes
            .iter()
            .filter(|p| (p.x - 0.5).abs() < 0.02)
            .map(|p| p.y)
            .collect();
        ys.sort_by(f64::total_cmp);
        ys.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        assert!(ys.len() >= 5, "{ys:?}");
    }

    #[test]
    fn refinement_is_nested_and_conforming() {
        let m = triangulate(&shapes::right_triangle(0.2), 0.1).unwrap();
        let r = m.refine().unwrap();
        r.check_boundary().unwrap();
        assert_eq!(r.triangles.len(), 4 * m.triangles.len());
        assert!((r.area() - m.area()).abs() < 1e-13);
        assert!((r.h_mesh - 0.5 * m.h_mesh).abs() < 1e-12);
        assert_eq!(&r.nodes[..m.nodes.len()], &m.nodes[..]);
    }

    #[test]
    fn rejects_size_out_of_range() {
        let sq = shapes::rectangle(1.0, 1.0);
        assert!(matches!(triangulate(&sq, 0.5), Err(Error::OutOfRange(_))));
        assert!(matches!(triangulate(&sq, 1e-3), Err(Error::Mesh(_))));
    }

    #[test]
    fn dirichlet_tags_follow_sides() {
        let mut m = triangulate(&shapes::rectangle(1.0, 1.0), 0.2).unwrap();
        m.set_dirichlet_where(|n| n.x > 0.5);
        let fixed = m.dirichlet_nodes();
        for (p, &f) in m.nodes.iter().zip(&fixed) {
            assert_eq!(f, (p.x - 1.0).abs() < 1e-12, "{p:?}");
        }
    }
}
