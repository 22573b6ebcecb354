//! Overlapping domain decomposition: element partitioning, overlap growth,
//! restriction index sets, and the multiplicity partition of unity.
//!
//! Subdomains are element sets. The dof set of a subdomain collects both
//! components at every vertex of its elements, ascending by global dof id,
//! so a restriction is a gather and an extension is a weighted scatter-add.
//! The partition of unity weights each dof by one over the number of
//! subdomains containing it, which makes `sum_i R_i^T D_i R_i` the identity
//! exactly (up to float rounding of 1/m).

use std::collections::HashMap;

use num_complex::Complex64;

use crate::mesh::{BoundaryEdge, SideTag, TriangleMesh};
use crate::{Error, Result};

/// How to split the elements into subdomains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionStrategy {
    /// Uniform `px` by `py` split of the mesh bounding box; elements are
    /// assigned by centroid, row-major ids `iy * px + ix`.
    Grid { px: usize, py: usize },
    /// Recursive coordinate bisection into `parts` pieces: each level sorts
    /// by centroid along the longer bounding-box axis and splits the element
    /// list proportionally to the part counts.
    CoordinateBisection { parts: usize },
}

/// Assigns every element a subdomain id in `0..n_parts`.
pub fn partition_elements(mesh: &TriangleMesh, strategy: PartitionStrategy) -> Result<Vec<usize>> {
    let nt = mesh.n_triangles();
    let n_parts = match strategy {
        PartitionStrategy::Grid { px, py } => px * py,
        PartitionStrategy::CoordinateBisection { parts } => parts,
    };
    if n_parts == 0 {
        return Err(Error::Usage("partition must request at least one subdomain".into()));
    }
    if n_parts > nt {
        return Err(Error::Usage(format!(
            "cannot split {nt} elements into {n_parts} subdomains"
        )));
    }
    match strategy {
        PartitionStrategy::Grid { px, py } => {
            let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for v in &mesh.vertices {
                for a in 0..2 {
                    lo[a] = lo[a].min(v[a]);
                    hi[a] = hi[a].max(v[a]);
                }
            }
            let cell = |c: f64, a: usize, n: usize| -> usize {
                let t = (c - lo[a]) / (hi[a] - lo[a]);
                ((t * n as f64) as usize).min(n - 1)
            };
            let owner: Vec<usize> = (0..nt)
                .map(|t| {
                    let c = mesh.centroid(t);
                    cell(c[1], 1, py) * px + cell(c[0], 0, px)
                })
                .collect();
            let mut counts = vec![0usize; n_parts];
            for &id in &owner {
                counts[id] += 1;
            }
            if let Some(empty) = counts.iter().position(|&c| c == 0) {
                return Err(Error::Partition(format!(
                    "grid cell {empty} contains no elements; coarsen the partition"
                )));
            }
            Ok(owner)
        }
        PartitionStrategy::CoordinateBisection { parts } => {
            let mut items: Vec<(usize, [f64; 2])> = (0..nt).map(|t| (t, mesh.centroid(t))).collect();
            let mut owner = vec![0usize; nt];
            let mut next_id = 0usize;
            bisect(&mut items, parts, &mut next_id, &mut owner);
            Ok(owner)
        }
    }
}

/// Recursive proportional split along the longer centroid bounding-box axis;
/// ties broken by element id for determinism.
fn bisect(items: &mut [(usize, [f64; 2])], parts: usize, next_id: &mut usize, owner: &mut [usize]) {
    if parts == 1 {
        for (t, _) in items.iter() {
            owner[*t] = *next_id;
        }
        *next_id += 1;
        return;
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for (_, c) in items.iter() {
        for a in 0..2 {
            lo[a] = lo[a].min(c[a]);
            hi[a] = hi[a].max(c[a]);
        }
    }
    let axis = usize::from(hi[1] - lo[1] > hi[0] - lo[0]);
    items.sort_unstable_by(|a, b| {
        a.1[axis].partial_cmp(&b.1[axis]).unwrap().then(a.0.cmp(&b.0))
    });
    let left_parts = parts / 2;
    let split = items.len() * left_parts / parts;
    let (left, right) = items.split_at_mut(split);
    bisect(left, left_parts, next_id, owner);
    bisect(right, parts - left_parts, next_id, owner);
}

/// Overlapping decomposition: per-subdomain element and dof index sets plus
/// two partitions of unity aligned with the dof sets.
///
/// `pou_weights` averages by 1/multiplicity. `owner_weights` is the 0/1
/// indicator of the unoverlapped partition (ties on subdomain boundaries go
/// to the lowest id); the Schwarz preconditioners extend with the indicator
/// weights, since averaging the overlap pollutes the optimized transmission
/// traces and breaks ORAS convergence. Both satisfy the exact identity
/// `sum_i R_i^T D_i R_i = I`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub n_dofs: usize,
    pub overlap_layers: usize,
    /// Ascending element ids of each overlapped subdomain.
    pub element_sets: Vec<Vec<usize>>,
    /// Ascending global dof ids of each subdomain (the restriction map R_i).
    pub subdomain_dofs: Vec<Vec<usize>>,
    /// Weight 1/multiplicity per dof, aligned with `subdomain_dofs`.
    pub pou_weights: Vec<Vec<f64>>,
    /// Indicator of dof ownership by the unoverlapped partition.
    pub owner_weights: Vec<Vec<f64>>,
}

impl Decomposition {
    pub fn n_subdomains(&self) -> usize {
        self.subdomain_dofs.len()
    }

    /// Gathers `R_i v`.
    pub fn restrict(&self, i: usize, v: &[Complex64]) -> Vec<Complex64> {
        self.subdomain_dofs[i].iter().map(|&d| v[d]).collect()
    }

    /// Scatter-adds `R_i^T D_i w` into `out` with the averaging weights.
    pub fn extend_weighted_add(&self, i: usize, w: &[Complex64], out: &mut [Complex64]) {
        for ((&d, &weight), &val) in
            self.subdomain_dofs[i].iter().zip(&self.pou_weights[i]).zip(w)
        {
            out[d] += weight * val;
        }
    }

    /// Scatter-adds `R_i^T D_i w` into `out` with the gluing weights.
    pub fn extend_owned_add(&self, i: usize, w: &[Complex64], out: &mut [Complex64]) {
        for ((&d, &weight), &val) in
            self.subdomain_dofs[i].iter().zip(&self.owner_weights[i]).zip(w)
        {
            if weight != 0.0 {
                out[d] += weight * val;
            }
        }
    }

    /// JSON-like debugging dump of subdomain sizes and overlap dof counts
    /// (dofs shared with at least one other subdomain).
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{{\"n_dofs\": {}, \"overlap_layers\": {}, \"subdomains\": [",
            self.n_dofs, self.overlap_layers
        );
        for i in 0..self.n_subdomains() {
            let shared = self.pou_weights[i].iter().filter(|&&w| w < 1.0).count();
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(&format!(
                "{{\"elements\": {}, \"dofs\": {}, \"overlap_dofs\": {}}}",
                self.element_sets[i].len(),
                self.subdomain_dofs[i].len(),
                shared
            ));
        }
        s.push_str("]}\n");
        s
    }
}

/// Grows each subdomain by `layers` applications of the one-layer rule (add
/// every element sharing a vertex with the current set) and derives dof sets
/// and partition-of-unity weights.
pub fn grow_overlap(mesh: &TriangleMesh, owner: &[usize], layers: usize) -> Result<Decomposition> {
    let nt = mesh.n_triangles();
    if owner.len() != nt {
        return Err(Error::Usage("element partition length does not match the mesh".into()));
    }
    let n_sub = owner.iter().max().map_or(0, |m| m + 1);
    if n_sub == 0 {
        return Err(Error::Usage("empty partition".into()));
    }
    let mut counts = vec![0usize; n_sub];
    for &id in owner {
        counts[id] += 1;
    }
    if let Some(empty) = counts.iter().position(|&c| c == 0) {
        return Err(Error::Partition(format!("subdomain {empty} owns no elements")));
    }

    let mut vertex_elements: Vec<Vec<usize>> = vec![Vec::new(); mesh.n_vertices()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for &v in tri {
            vertex_elements[v].push(t);
        }
    }

    let mut element_sets = Vec::with_capacity(n_sub);
    let mut subdomain_dofs = Vec::with_capacity(n_sub);
    for i in 0..n_sub {
        let mut in_set: Vec<bool> = owner.iter().map(|&id| id == i).collect();
        for _ in 0..layers {
            let mut vertex_marked = vec![false; mesh.n_vertices()];
            for (t, tri) in mesh.triangles.iter().enumerate() {
                if in_set[t] {
                    for &v in tri {
                        vertex_marked[v] = true;
                    }
                }
            }
            for (t, tri) in mesh.triangles.iter().enumerate() {
                if !in_set[t] && tri.iter().any(|&v| vertex_marked[v]) {
                    in_set[t] = true;
                }
            }
        }
        let elements: Vec<usize> = (0..nt).filter(|&t| in_set[t]).collect();
        let mut vertex_in = vec![false; mesh.n_vertices()];
        for &t in &elements {
            for &v in &mesh.triangles[t] {
                vertex_in[v] = true;
            }
        }
        let dofs: Vec<usize> = (0..mesh.n_vertices())
            .filter(|&v| vertex_in[v])
            .flat_map(|v| [2 * v, 2 * v + 1])
            .collect();
        element_sets.push(elements);
        subdomain_dofs.push(dofs);
    }

    let n_dofs = 2 * mesh.n_vertices();
    let pou_weights = build_pou(n_dofs, &subdomain_dofs)?;

    // Ownership from the unoverlapped partition: a dof belongs to the lowest
    // subdomain id among the owners of its incident elements.
    let mut dof_owner = vec![usize::MAX; n_dofs];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for &v in tri {
            for d in [2 * v, 2 * v + 1] {
                dof_owner[d] = dof_owner[d].min(owner[t]);
            }
        }
    }
    let owner_weights: Vec<Vec<f64>> = subdomain_dofs
        .iter()
        .enumerate()
        .map(|(i, dofs)| dofs.iter().map(|&d| f64::from(u8::from(dof_owner[d] == i))).collect())
        .collect();

    Ok(Decomposition {
        n_dofs,
        overlap_layers: layers,
        element_sets,
        subdomain_dofs,
        pou_weights,
        owner_weights,
    })
}

/// Multiplicity partition of unity: weight 1/m at a dof contained in `m`
/// subdomains. Fails if some dof is in none.
pub fn build_pou(n_dofs: usize, subdomain_dofs: &[Vec<usize>]) -> Result<Vec<Vec<f64>>> {
    let mut multiplicity = vec![0usize; n_dofs];
    for dofs in subdomain_dofs {
        for &d in dofs {
            multiplicity[d] += 1;
        }
    }
    if let Some(uncovered) = multiplicity.iter().position(|&m| m == 0) {
        return Err(Error::Partition(format!(
            "dof {uncovered} is not covered by any subdomain"
        )));
    }
    Ok(subdomain_dofs
        .iter()
        .map(|dofs| dofs.iter().map(|&d| 1.0 / multiplicity[d] as f64).collect())
        .collect())
}

/// A subdomain mesh with its maps back to the parent numbering. Boundary
/// edges keep their parent tag when they lie on the parent boundary; edges
/// created by the cut are tagged [`SideTag::Interface`].
#[derive(Debug, Clone)]
pub struct Submesh {
    pub mesh: TriangleMesh,
    /// Local vertex id -> parent vertex id.
    pub vertex_map: Vec<usize>,
    /// Local dof id -> parent dof id (components interleaved).
    pub dof_map: Vec<usize>,
    /// Indices into `mesh.boundary_edges` of the interface edges.
    pub interface_edges: Vec<usize>,
}

/// Extracts the submesh induced by `elements` (ascending parent element ids).
pub fn extract_submesh(parent: &TriangleMesh, elements: &[usize]) -> Result<Submesh> {
    if elements.is_empty() {
        return Err(Error::Usage("cannot extract an empty submesh".into()));
    }
    if elements.windows(2).any(|w| w[0] >= w[1]) || *elements.last().unwrap() >= parent.n_triangles()
    {
        return Err(Error::Usage("element list must be ascending and in range".into()));
    }

    let mut local_of = vec![usize::MAX; parent.n_vertices()];
    let mut vertex_map = Vec::new();
    let mut triangles = Vec::with_capacity(elements.len());
    let mut element_region = Vec::with_capacity(elements.len());
    for &t in elements {
        let mut local = [0usize; 3];
        for (slot, &v) in local.iter_mut().zip(&parent.triangles[t]) {
            if local_of[v] == usize::MAX {
                local_of[v] = vertex_map.len();
                vertex_map.push(v);
            }
            *slot = local_of[v];
        }
        triangles.push(local);
        element_region.push(parent.element_region[t]);
    }
    let vertices: Vec<[f64; 2]> = vertex_map.iter().map(|&v| parent.vertices[v]).collect();

    // Local boundary: directed triangle edges whose reverse is absent. The
    // parent tag survives where the directed edge is on the parent boundary.
    let mut directed: HashMap<(usize, usize), ()> = HashMap::new();
    for tri in &triangles {
        for e in 0..3 {
            directed.insert((tri[e], tri[(e + 1) % 3]), ());
        }
    }
    let parent_tags: HashMap<(usize, usize), SideTag> =
        parent.boundary_edges.iter().map(|e| ((e.v[0], e.v[1]), e.tag)).collect();
    let mut boundary_edges = Vec::new();
    let mut interface_edges = Vec::new();
    for tri in &triangles {
        for e in 0..3 {
            let (a, b) = (tri[e], tri[(e + 1) % 3]);
            if !directed.contains_key(&(b, a)) {
                let tag = parent_tags
                    .get(&(vertex_map[a], vertex_map[b]))
                    .copied()
                    .unwrap_or(SideTag::Interface);
                if tag == SideTag::Interface {
                    interface_edges.push(boundary_edges.len());
                }
                boundary_edges.push(BoundaryEdge { v: [a, b], tag });
            }
        }
    }

    let mesh = TriangleMesh { vertices, triangles, boundary_edges, element_region };
    mesh.validate()?;
    let dof_map: Vec<usize> =
        vertex_map.iter().flat_map(|&v| [2 * v, 2 * v + 1]).collect();
    Ok(Submesh { mesh, vertex_map, dof_map, interface_edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_rect_mesh;

    #[test]
    fn grid_2x1_splits_at_midline() {
        let mesh = build_rect_mesh(4, 4, [0.0, 1.0], [0.0, 1.0]).unwrap();
        let owner =
            partition_elements(&mesh, PartitionStrategy::Grid { px: 2, py: 1 }).unwrap();
        for (t, &id) in owner.iter().enumerate() {
            let expected = usize::from(mesh.centroid(t)[0] > 0.5);
            assert_eq!(id, expected, "element {t}");
        }
    }

    #[test]
    fn grid_4x4_has_sixteen_nonempty_parts() {
        let mesh = build_rect_mesh(16, 16, [0.0, 1.0], [0.0, 1.0]).unwrap();
        let owner =
            partition_elements(&mesh, PartitionStrategy::Grid { px: 4, py: 4 }).unwrap();
        let mut counts = vec![0usize; 16];
        for &id in &owner {
            counts[id] += 1;
        }
        assert!(counts.iter().all(|&c| c == 32), "{counts:?}");
    }

    #[test]
    fn bisection_parts_are_nonempty_proportional_and_connected() {
        let mesh = build_rect_mesh(20, 20, [-1.0, 1.0], [-1.0, 1.0]).unwrap();
        let owner =
            partition_elements(&mesh, PartitionStrategy::CoordinateBisection { parts: 4 })
                .unwrap();
        let mut counts = vec![0usize; 4];
        for &id in &owner {
            counts[id] += 1;
        }
        assert!(counts.iter().all(|&c| c == 200), "{counts:?}");
        // Edge-adjacency BFS: each part must be a single connected component.
        let mut edge_owner: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                edge_owner.entry((a.min(b), a.max(b))).or_default().push(t);
            }
        }
        for part in 0..4 {
            let members: Vec<usize> =
                (0..mesh.n_triangles()).filter(|&t| owner[t] == part).collect();
            let mut seen = vec![false; mesh.n_triangles()];
            let mut queue = vec![members[0]];
            seen[members[0]] = true;
            while let Some(t) = queue.pop() {
                for e in 0..3 {
                    let tri = mesh.triangles[t];
                    let (a, b) = (tri[e], tri[(e + 1) % 3]);
                    for &s in &edge_owner[&(a.min(b), a.max(b))] {
                        if owner[s] == part && !seen[s] {
                            seen[s] = true;
                            queue.push(s);
                        }
                    }
                }
            }
            assert!(members.iter().all(|&t| seen[t]), "part {part} disconnected");
        }
    }

    #[test]
    fn partition_rejects_degenerate_requests() {
        let mesh = build_rect_mesh(2, 1, [0.0, 1.0], [0.0, 1.0]).unwrap();
        assert!(partition_elements(&mesh, PartitionStrategy::Grid { px: 0, py: 3 }).is_err());
        assert!(
            partition_elements(&mesh, PartitionStrategy::Grid { px: 5, py: 1 }).is_err()
        );
        assert!(partition_elements(
            &mesh,
            PartitionStrategy::CoordinateBisection { parts: 9 }
        )
        .is_err());
    }

    #[test]
    fn overlap_growth_is_monotone_from_the_partition() {
        let mesh = build_rect_mesh(8, 4, [0.0, 2.0], [0.0, 1.0]).unwrap();
        let owner =
            partition_elements(&mesh, PartitionStrategy::Grid { px: 2, py: 1 }).unwrap();
        let d0 = grow_overlap(&mesh, &owner, 0).unwrap();
        let d1 = grow_overlap(&mesh, &owner, 1).unwrap();
        let d2 = grow_overlap(&mesh, &owner, 2).unwrap();
        for i in 0..2 {
            let owned: Vec<usize> =
                (0..mesh.n_triangles()).filter(|&t| owner[t] == i).collect();
            assert_eq!(d0.element_sets[i], owned);
            let s0: std::collections::HashSet<_> = d0.element_sets[i].iter().collect();
            let s1: std::collections::HashSet<_> = d1.element_sets[i].iter().collect();
            let s2: std::collections::HashSet<_> = d2.element_sets[i].iter().collect();
            assert!(s0.is_subset(&s1) && s1.is_subset(&s2));
            assert!(d1.element_sets[i].len() > d0.element_sets[i].len());
        }
    }

    #[test]
    fn one_layer_overlap_spans_two_mesh_layers() {
        // h = 0.25; after l=1 the two halves share exactly the vertices
        // within one mesh layer of the cut on each side: |x - 1| <= h.
        let mesh = build_rect_mesh(8, 4, [0.0, 2.0], [0.0, 1.0]).unwrap();
        let owner =
            partition_elements(&mesh, PartitionStrategy::Grid { px: 2, py: 1 }).unwrap();
        let d = grow_overlap(&mesh, &owner, 1).unwrap();
        let left: std::collections::HashSet<_> = d.subdomain_dofs[0].iter().collect();
        let shared: Vec<usize> =
            d.subdomain_dofs[1].iter().copied().filter(|d| left.contains(d)).collect();
        assert!(!shared.is_empty());
        for dof in shared {
            let x = mesh.vertices[dof / 2][0];
            assert!((x - 1.0).abs() <= 0.25 + 1e-12, "shared dof at x = {x}");
        }
        for &dof in &d.subdomain_dofs[0] {
            assert!(mesh.vertices[dof / 2][0] <= 1.25 + 1e-12);
        }
    }

    #[test]
    fn pou_weights_are_reciprocal_multiplicities() {
        let dofs = vec![vec![0, 1, 2], vec![2, 3]];
        let w = build_pou(4, &dofs).unwrap();
        assert_eq!(w[0], vec![1.0, 1.0, 0.5]);
        assert_eq!(w[1], vec![0.5, 1.0]);
        assert!(matches!(build_pou(5, &dofs), Err(Error::Partition(_))));
    }

    #[test]
    fn pou_identity_holds_on_a_grown_grid_decomposition() {
        let mesh = build_rect_mesh(10, 10, [0.0, 1.0], [0.0, 1.0]).unwrap();
        let owner =
            partition_elements(&mesh, PartitionStrategy::Grid { px: 2, py: 2 }).unwrap();
        let d = grow_overlap(&mesh, &owner, 1).unwrap();
        for weights in [&d.pou_weights, &d.owner_weights] {
            let mut total = vec![0.0f64; d.n_dofs];
            for i in 0..d.n_subdomains() {
                for (&dof, &w) in d.subdomain_dofs[i].iter().zip(&weights[i]) {
                    total[dof] += w;
                }
            }
            for (dof, &t) in total.iter().enumerate() {
                assert!((t - 1.0).abs() <= 1e-15, "dof {dof}: sum = {t}");
            }
        }
        // Ownership weights are a disjoint 0/1 split of each overlap.
        for ws in &d.owner_weights {
            assert!(ws.iter().all(|&w| w == 0.0 || w == 1.0));
        }
    }

    #[test]
    fn submesh_keeps_parent_tags_and_marks_the_cut() {
        let mesh = build_rect_mesh(8, 4, [0.0, 2.0], [0.0, 1.0]).unwrap();
        let owner =
            partition_elements(&mesh, PartitionStrategy::Grid { px: 2, py: 1 }).unwrap();
        let d = grow_overlap(&mesh, &owner, 1).unwrap();
        let sub = extract_submesh(&mesh, &d.element_sets[0]).unwrap();
        assert!(sub.mesh.validate().is_ok());
        assert!(!sub.interface_edges.is_empty());
        for (idx, edge) in sub.mesh.boundary_edges.iter().enumerate() {
            let xs = [sub.mesh.vertices[edge.v[0]][0], sub.mesh.vertices[edge.v[1]][0]];
            if edge.tag == SideTag::Interface {
                assert!(sub.interface_edges.contains(&idx));
                // The cut of the grown left half sits on x = 1 + h.
                assert!(xs.iter().all(|&x| (x - 1.25).abs() < 1e-12), "{xs:?}");
            } else {
                assert!(sub.interface_edges.iter().all(|&e| e != idx));
            }
        }
        // Maps are consistent: local dof 2v+c points at parent dof of the
        // same component at the mapped vertex.
        for (lv, &gv) in sub.vertex_map.iter().enumerate() {
            assert_eq!(sub.mesh.vertices[lv], mesh.vertices[gv]);
            assert_eq!(sub.dof_map[2 * lv], 2 * gv);
            assert_eq!(sub.dof_map[2 * lv + 1], 2 * gv + 1);
        }
        let summary = grow_overlap(&mesh, &owner, 1).unwrap().summary();
        assert!(summary.contains("\"overlap_dofs\""));
    }
}
