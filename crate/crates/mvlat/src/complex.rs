//! The Minkowski-Voronoi complex of an axial set: faces are relative
//! minima, edges are minimal pairs, vertices are minimal triples, and
//! incidence is subset containment.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::minima::{
    box_corner, fold_rank1, is_general_position, minimal_subsets, vrm_bruteforce, AxialSet,
    LatticeSpec, MinimalityMode, Point3,
};
use crate::{Error, Result};

pub type FaceId = usize;
pub type EdgeId = usize;
pub type VertexId = usize;

/// An edge: a minimal pair of minima with its incident vertices.
/// One incident vertex means the edge is an infinite ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeData {
    pub pair: (FaceId, FaceId),
    pub vertices: Vec<VertexId>,
}

impl EdgeData {
    pub fn is_ray(&self) -> bool {
        self.vertices.len() == 1
    }
}

/// A vertex: a minimal triple with the corner of its box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexData {
    pub triple: [FaceId; 3],
    pub corner: Point3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MVComplex {
    /// Minima in sorted point order; the face index is the id.
    pub faces: Vec<Point3>,
    /// Faces playing the x, y, z axis roles.
    #[serde(with = "axis_roles_serde")]
    pub axis_roles: [FaceId; 3],
    pub edges: Vec<EdgeData>,
    pub vertices: Vec<VertexData>,
    pub mode: MinimalityMode,
}

mod axis_roles_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Roles {
        x: usize,
        y: usize,
        z: usize,
    }

    pub fn serialize<S: Serializer>(r: &[usize; 3], s: S) -> Result<S::Ok, S::Error> {
        Roles { x: r[0], y: r[1], z: r[2] }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[usize; 3], D::Error> {
        let r = Roles::deserialize(d)?;
        Ok([r.x, r.y, r.z])
    }
}

impl MVComplex {
    pub fn face_id(&self, p: &Point3) -> Option<FaceId> {
        self.faces.binary_search(p).ok()
    }

    pub fn edge_id(&self, a: FaceId, b: FaceId) -> Option<EdgeId> {
        let pair = (a.min(b), a.max(b));
        self.edges.iter().position(|e| e.pair == pair)
    }

    /// The three edges incident to a vertex.
    pub fn edges_at_vertex(&self, v: VertexId) -> [EdgeId; 3] {
        let [a, b, c] = self.vertices[v].triple;
        [
            self.edge_id(a, b).expect("vertex pair must be an edge"),
            self.edge_id(a, c).expect("vertex pair must be an edge"),
            self.edge_id(b, c).expect("vertex pair must be an edge"),
        ]
    }

    /// The other endpoint of a finite edge.
    pub fn other_vertex(&self, e: EdgeId, v: VertexId) -> Option<VertexId> {
        let verts = &self.edges[e].vertices;
        verts.iter().copied().find(|&w| w != v)
    }

    pub fn vertex_has_ray(&self, v: VertexId) -> bool {
        self.edges_at_vertex(v)
            .iter()
            .any(|&e| self.edges[e].is_ray())
    }

    /// The unique vertex containing both given axis faces: v_B for (x,y),
    /// v_R for (y,z), v_L for (x,z).
    pub fn corner_vertex(&self, role_a: usize, role_b: usize) -> VertexId {
        let fa = self.axis_roles[role_a];
        let fb = self.axis_roles[role_b];
        self.vertices
            .iter()
            .position(|v| v.triple.contains(&fa) && v.triple.contains(&fb))
            .expect("axis pair lies in exactly one triple")
    }

    pub fn v_bottom(&self) -> VertexId {
        self.corner_vertex(0, 1)
    }

    pub fn v_right(&self) -> VertexId {
        self.corner_vertex(1, 2)
    }

    pub fn v_left(&self) -> VertexId {
        self.corner_vertex(0, 2)
    }

    /// Compact faces are exactly the non-axis faces.
    pub fn is_compact_face(&self, f: FaceId) -> bool {
        !self.axis_roles.contains(&f)
    }

    /// Vertices and connecting edges of one face boundary, as an
    /// undirected chain. Closed cycle for compact faces, open path
    /// (ray to ray) for the three axis faces.
    pub fn face_chain(&self, f: FaceId) -> Result<(Vec<VertexId>, bool)> {
        let verts: Vec<VertexId> = (0..self.vertices.len())
            .filter(|&v| self.vertices[v].triple.contains(&f))
            .collect();
        if verts.is_empty() {
            return Err(Error::Internal(format!("face {f} has no vertices")));
        }
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for e in &self.edges {
            if e.pair.0 == f || e.pair.1 == f {
                if e.vertices.len() == 2 {
                    adj.entry(e.vertices[0]).or_default().push(e.vertices[1]);
                    adj.entry(e.vertices[1]).or_default().push(e.vertices[0]);
                }
            }
        }
        let closed = self.is_compact_face(f);
        let start = if closed {
            verts[0]
        } else {
            // an endpoint of the open chain touches a ray of this face
            *verts
                .iter()
                .find(|&&v| adj.get(&v).map_or(0, |a| a.len()) < 2)
                .ok_or_else(|| Error::Internal(format!("face {f}: no chain endpoint")))?
        };
        let mut chain = vec![start];
        let mut prev = None;
        loop {
            let cur = *chain.last().unwrap();
            let nexts = adj.get(&cur).cloned().unwrap_or_default();
            let next = nexts.into_iter().find(|&w| Some(w) != prev);
            match next {
                Some(w) if closed && w == start => break,
                Some(w) => {
                    prev = Some(cur);
                    chain.push(w);
                    if chain.len() > verts.len() {
                        return Err(Error::Internal(format!("face {f}: boundary is not a chain")));
                    }
                }
                None => break,
            }
        }
        if chain.len() != verts.len() {
            return Err(Error::Internal(format!(
                "face {f}: boundary chain covers {} of {} vertices",
                chain.len(),
                verts.len()
            )));
        }
        Ok((chain, closed))
    }
}

/// Build the complex of an axial set under the chosen minimality mode.
///
/// The general-position requirement is checked on the set of relative
/// minima: that is the set the construction actually consumes, and for
/// lattices it is the set the theory guarantees to be in general position.
pub fn build_complex(set: &AxialSet, ground: &[Point3], mode: MinimalityMode) -> Result<MVComplex> {
    let vrm = vrm_bruteforce(set);
    let vrm_set = AxialSet::new(set.anchors, vrm.clone()).map_err(|_| {
        Error::Degenerate("relative minima do not form an axial set".into())
    })?;
    if let crate::minima::GeneralPosition::Violation(v) = is_general_position(&vrm_set) {
        return Err(Error::Degenerate(format!("relative minima not in general position: {v}")));
    }

    let ground_ref: &[Point3] = match mode {
        MinimalityMode::Literal => &vrm,
        MinimalityMode::OpenInterior => ground,
    };
    let faces = minimal_subsets(set, ground_ref, 1, mode)?;
    let pairs = minimal_subsets(set, ground_ref, 2, mode)?;
    let triples = minimal_subsets(set, ground_ref, 3, mode)?;

    let face_points: Vec<Point3> = faces.into_iter().map(|f| f[0]).collect();
    if face_points != vrm {
        return Err(Error::Internal(
            "minimal 1-subsets differ from the relative minima".into(),
        ));
    }
    let fid = |p: &Point3| -> Result<FaceId> {
        face_points
            .binary_search(p)
            .map_err(|_| Error::Internal(format!("face lookup failed for {p}")))
    };

    let mut vertices = Vec::new();
    for t in &triples {
        let mut ids = [fid(&t[0])?, fid(&t[1])?, fid(&t[2])?];
        ids.sort_unstable();
        vertices.push(VertexData { triple: ids, corner: box_corner(t) });
    }

    let mut edges = Vec::new();
    for p in &pairs {
        let pair = {
            let (a, b) = (fid(&p[0])?, fid(&p[1])?);
            (a.min(b), a.max(b))
        };
        let incident: Vec<VertexId> = (0..vertices.len())
            .filter(|&v| {
                vertices[v].triple.contains(&pair.0) && vertices[v].triple.contains(&pair.1)
            })
            .collect();
        if incident.is_empty() || incident.len() > 2 {
            return Err(Error::Internal(format!(
                "edge {:?} lies in {} triples",
                pair,
                incident.len()
            )));
        }
        edges.push(EdgeData { pair, vertices: incident });
    }

    let anchor_pts = set.anchor_points();
    let axis_roles = [fid(&anchor_pts[0])?, fid(&anchor_pts[1])?, fid(&anchor_pts[2])?];

    let complex = MVComplex { faces: face_points, axis_roles, edges, vertices, mode };

    // structural guards: three rays, exactly the axis pairs
    let rays: BTreeSet<(FaceId, FaceId)> = complex
        .edges
        .iter()
        .filter(|e| e.is_ray())
        .map(|e| e.pair)
        .collect();
    let expected: BTreeSet<(FaceId, FaceId)> = [(0usize, 1usize), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (axis_roles[i], axis_roles[j]);
            (a.min(b), a.max(b))
        })
        .collect();
    if rays != expected {
        return Err(Error::Internal(format!(
            "ray edges {rays:?} differ from the axis pairs {expected:?}"
        )));
    }
    for (v, data) in complex.vertices.iter().enumerate() {
        let [a, b, c] = data.triple;
        for (x, y) in [(a, b), (a, c), (b, c)] {
            if complex.edge_id(x, y).is_none() {
                return Err(Error::Internal(format!(
                    "vertex {v} has a non-minimal sub-pair ({x},{y})"
                )));
            }
        }
    }
    Ok(complex)
}

/// Complex of a rank-1 lattice: open-interior mode over the extended
/// ground set of folds.
pub fn lattice_complex(spec: &LatticeSpec) -> Result<MVComplex> {
    if !spec.coprime() {
        return Err(Error::Domain(format!(
            "lattice ({},{},{}): a and b must be coprime to N",
            spec.a, spec.b, spec.n
        )));
    }
    let (set, ground) = fold_rank1(spec)?;
    build_complex(&set, &ground, MinimalityMode::OpenInterior)
}

/// The Voronoi graph (1-skeleton) and the Minkowski graph (face adjacency).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonGraphs {
    pub voronoi_nodes: usize,
    /// Finite arcs only; rays have a single endpoint and appear in `voronoi_rays`.
    pub voronoi_arcs: Vec<(VertexId, VertexId)>,
    pub voronoi_rays: Vec<VertexId>,
    pub minkowski_nodes: usize,
    pub minkowski_arcs: Vec<(FaceId, FaceId)>,
}

pub fn skeleton_graphs(c: &MVComplex) -> SkeletonGraphs {
    let mut voronoi_arcs = Vec::new();
    let mut voronoi_rays = Vec::new();
    let mut minkowski_arcs = Vec::new();
    for e in &c.edges {
        minkowski_arcs.push(e.pair);
        match e.vertices.as_slice() {
            [v] => voronoi_rays.push(*v),
            [v, w] => voronoi_arcs.push((*v.min(w), *v.max(w))),
            _ => unreachable!(),
        }
    }
    voronoi_arcs.sort_unstable();
    voronoi_rays.sort_unstable();
    minkowski_arcs.sort_unstable();
    SkeletonGraphs {
        voronoi_nodes: c.vertices.len(),
        voronoi_arcs,
        voronoi_rays,
        minkowski_nodes: c.faces.len(),
        minkowski_arcs,
    }
}

/// Canonical signature: equal strings identify combinatorially equivalent
/// complexes under axis-role-preserving isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature(pub String);

impl Signature {
    /// Short stable FNV-1a hash for CSV columns.
    pub fn short_hash(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.0.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

/// Serialize the complex in the deterministic order produced by the layout
/// construction, so the string is independent of input point labels.
pub fn signature(c: &MVComplex) -> Result<Signature> {
    let d = crate::diagram::layout(c)?;
    // rank vertices by placement order, compact faces by construction order
    let mut vrank = vec![usize::MAX; c.vertices.len()];
    for (rank, &v) in d.construction.vertex_order.iter().enumerate() {
        vrank[v] = rank;
    }
    let mut frank = vec![usize::MAX; c.faces.len()];
    for (i, &f) in c.axis_roles.iter().enumerate() {
        frank[f] = i;
    }
    for (i, &f) in d.construction.face_order.iter().enumerate() {
        frank[f] = 3 + i;
    }
    let mut s = format!(
        "MV1;F{};E{};V{};",
        c.faces.len(),
        c.edges.len(),
        c.vertices.len()
    );
    for &v in &d.construction.vertex_order {
        let mut t: Vec<usize> = c.vertices[v].triple.iter().map(|&f| frank[f]).collect();
        t.sort_unstable();
        s.push_str(&format!("v{},{},{};", t[0], t[1], t[2]));
    }
    let mut edge_lines = Vec::new();
    for (eid, e) in c.edges.iter().enumerate() {
        let mut fr = [frank[e.pair.0], frank[e.pair.1]];
        fr.sort_unstable();
        let (vs, dir) = match e.vertices.as_slice() {
            [v] => (
                (vrank[*v], usize::MAX),
                crate::diagram::ray_direction(c, eid)?.index(),
            ),
            [v, w] => {
                let (lo, hi) = if vrank[*v] < vrank[*w] { (*v, *w) } else { (*w, *v) };
                (
                    (vrank[lo], vrank[hi]),
                    crate::diagram::edge_direction(c, lo, eid)?.index(),
                )
            }
            _ => unreachable!(),
        };
        edge_lines.push((vs, fr, dir));
    }
    edge_lines.sort_unstable();
    for ((v1, v2), fr, dir) in edge_lines {
        if v2 == usize::MAX {
            s.push_str(&format!("r{v1}:{},{}:{dir};", fr[0], fr[1]));
        } else {
            s.push_str(&format!("e{v1},{v2}:{},{}:{dir};", fr[0], fr[1]));
        }
    }
    Ok(Signature(s))
}

/// Combinatorial equivalence: an incidence-preserving bijection of faces,
/// edges and vertices. Anchored equivalence additionally fixes the three
/// axis roles, which is what family comparisons use.
pub fn equivalent(c1: &MVComplex, c2: &MVComplex, anchored: bool) -> bool {
    if c1.faces.len() != c2.faces.len()
        || c1.edges.len() != c2.edges.len()
        || c1.vertices.len() != c2.vertices.len()
    {
        return false;
    }
    let role_perms: Vec<[usize; 3]> = if anchored {
        vec![[0, 1, 2]]
    } else {
        vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
    };
    role_perms.iter().any(|perm| {
        let mut map = vec![usize::MAX; c1.faces.len()];
        let mut used = vec![false; c2.faces.len()];
        for i in 0..3 {
            let from = c1.axis_roles[i];
            let to = c2.axis_roles[perm[i]];
            if map[from] != usize::MAX && map[from] != to {
                return false;
            }
            map[from] = to;
            used[to] = true;
        }
        extend_face_map(c1, c2, &mut map, &mut used)
    })
}

fn edge_set(c: &MVComplex) -> BTreeSet<(FaceId, FaceId)> {
    c.edges.iter().map(|e| e.pair).collect()
}

fn triple_set(c: &MVComplex) -> BTreeSet<[FaceId; 3]> {
    c.vertices.iter().map(|v| v.triple).collect()
}

fn extend_face_map(
    c1: &MVComplex,
    c2: &MVComplex,
    map: &mut Vec<FaceId>,
    used: &mut Vec<bool>,
) -> bool {
    let e1 = edge_set(c1);
    let e2 = edge_set(c2);
    let t1 = triple_set(c1);
    let t2 = triple_set(c2);
    let deg = |c: &MVComplex, f: FaceId| -> usize {
        c.edges.iter().filter(|e| e.pair.0 == f || e.pair.1 == f).count()
    };
    let order: Vec<FaceId> = (0..c1.faces.len()).filter(|&f| map[f] == usize::MAX).collect();

    fn consistent(
        f: FaceId,
        g: FaceId,
        map: &[FaceId],
        e1: &BTreeSet<(FaceId, FaceId)>,
        e2: &BTreeSet<(FaceId, FaceId)>,
    ) -> bool {
        for (h, &hg) in map.iter().enumerate() {
            if hg == usize::MAX || h == f {
                continue;
            }
            let p1 = (f.min(h), f.max(h));
            let p2 = (g.min(hg), g.max(hg));
            if e1.contains(&p1) != e2.contains(&p2) {
                return false;
            }
        }
        true
    }

    fn rec(
        idx: usize,
        order: &[FaceId],
        c1: &MVComplex,
        c2: &MVComplex,
        map: &mut Vec<FaceId>,
        used: &mut Vec<bool>,
        e1: &BTreeSet<(FaceId, FaceId)>,
        e2: &BTreeSet<(FaceId, FaceId)>,
        t1: &BTreeSet<[FaceId; 3]>,
        t2: &BTreeSet<[FaceId; 3]>,
        deg1: &[usize],
        deg2: &[usize],
    ) -> bool {
        if idx == order.len() {
            // full bijection found; verify triples both ways
            let mapped: BTreeSet<[FaceId; 3]> = t1
                .iter()
                .map(|t| {
                    let mut m = [map[t[0]], map[t[1]], map[t[2]]];
                    m.sort_unstable();
                    m
                })
                .collect();
            return &mapped == t2;
        }
        let f = order[idx];
        for g in 0..c2.faces.len() {
            if used[g] || deg1[f] != deg2[g] {
                continue;
            }
            if !consistent(f, g, map, e1, e2) {
                continue;
            }
            map[f] = g;
            used[g] = true;
            if rec(idx + 1, order, c1, c2, map, used, e1, e2, t1, t2, deg1, deg2) {
                return true;
            }
            map[f] = usize::MAX;
            used[g] = false;
        }
        false
    }

    let deg1: Vec<usize> = (0..c1.faces.len()).map(|f| deg(c1, f)).collect();
    let deg2: Vec<usize> = (0..c2.faces.len()).map(|f| deg(c2, f)).collect();
    // the anchored seed must itself be consistent
    for f in 0..c1.faces.len() {
        if map[f] != usize::MAX && (deg1[f] != deg2[map[f]] || !consistent(f, map[f], map, &e1, &e2))
        {
            return false;
        }
    }
    rec(0, &order, c1, c2, map, used, &e1, &e2, &t1, &t2, &deg1, &deg2)
}

/// Coordinate-role permutation of a complex (x,y,z roles shuffled),
/// used by the unanchored equivalence flag and its tests.
pub fn permute_roles(c: &MVComplex, perm: [usize; 3]) -> MVComplex {
    let permute = |p: &Point3| -> Point3 {
        let co = [p.x, p.y, p.z];
        Point3::new(co[perm[0]], co[perm[1]], co[perm[2]])
    };
    let mut new_points: Vec<(Point3, FaceId)> = c
        .faces
        .iter()
        .enumerate()
        .map(|(i, p)| (permute(p), i))
        .collect();
    new_points.sort();
    let mut old_to_new = vec![0usize; c.faces.len()];
    for (new_id, (_, old_id)) in new_points.iter().enumerate() {
        old_to_new[*old_id] = new_id;
    }
    let faces: Vec<Point3> = new_points.iter().map(|(p, _)| *p).collect();
    let mut axis_roles = [0usize; 3];
    for i in 0..3 {
        axis_roles[i] = old_to_new[c.axis_roles[perm[i]]];
    }
    let mut edges: Vec<EdgeData> = c
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (old_to_new[e.pair.0], old_to_new[e.pair.1]);
            EdgeData { pair: (a.min(b), a.max(b)), vertices: e.vertices.clone() }
        })
        .collect();
    edges.sort_by_key(|e| e.pair);
    let vertices: Vec<VertexData> = c
        .vertices
        .iter()
        .map(|v| {
            let mut t = [
                old_to_new[v.triple[0]],
                old_to_new[v.triple[1]],
                old_to_new[v.triple[2]],
            ];
            t.sort_unstable();
            VertexData { triple: t, corner: permute(&v.corner) }
        })
        .collect();
    MVComplex { faces, axis_roles, edges, vertices, mode: c.mode }
}
