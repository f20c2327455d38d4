//! Edge direction labels, vertex types, face boundary cycles, the
//! ascending-path layout algorithm, diagram validation and rendering.
//!
//! Plane coordinates are exact rationals (λ, μ) with position
//! λ·e2 + μ·e3, where e1 = (-1/2, √3/2), e2 = (1/2, √3/2), e3 = (1, 0),
//! so e1 = e2 - e3. No floating point appears before SVG emission.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::complex::{EdgeId, FaceId, MVComplex, VertexId};
use crate::{Error, Result};

pub type Rat = BigRational;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// One of the six hexagonal directions k·π/3. The integer encoding is
/// 0:e3, 1:e2, 2:e1, 3:-e3, 4:-e2, 5:-e1.
///
/// Each direction changes exactly two of the three box sizes
/// (convention D-1):
/// e2: x down, z up;  e1: y down, z up;  -e3: x up, y down;
/// and the opposite directions swap up and down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Direction {
    E3,
    E2,
    E1,
    NegE3,
    NegE2,
    NegE1,
}

use Direction::*;

impl Direction {
    pub const ALL: [Direction; 6] = [E3, E2, E1, NegE3, NegE2, NegE1];

    pub fn index(self) -> u8 {
        match self {
            E3 => 0,
            E2 => 1,
            E1 => 2,
            NegE3 => 3,
            NegE2 => 4,
            NegE1 => 5,
        }
    }

    pub fn from_index(i: u8) -> Result<Direction> {
        Direction::ALL
            .get(i as usize)
            .copied()
            .ok_or_else(|| Error::Domain(format!("direction index {i} out of range")))
    }

    pub fn opposite(self) -> Direction {
        Direction::from_index((self.index() + 3) % 6).unwrap()
    }

    /// Step in the (λ, μ) basis.
    pub fn delta(self) -> (i64, i64) {
        match self {
            E3 => (0, 1),
            E2 => (1, 0),
            E1 => (1, -1),
            NegE3 => (0, -1),
            NegE2 => (-1, 0),
            NegE1 => (-1, 1),
        }
    }

    /// (increasing, decreasing, unchanged) coordinate indices under D-1.
    pub fn size_change(self) -> (usize, usize, usize) {
        match self {
            E1 => (2, 1, 0),
            E2 => (2, 0, 1),
            E3 => (1, 0, 2),
            NegE1 => (1, 2, 0),
            NegE2 => (0, 2, 1),
            NegE3 => (0, 1, 2),
        }
    }

    /// The coordinate this direction decreases; the two directions sharing
    /// a value form one of the three groups of the vertex-type proposition.
    pub fn decreasing_group(self) -> usize {
        self.size_change().1
    }
}

impl From<Direction> for u8 {
    fn from(d: Direction) -> u8 {
        d.index()
    }
}

impl TryFrom<u8> for Direction {
    type Error = String;
    fn try_from(i: u8) -> std::result::Result<Direction, String> {
        Direction::from_index(i).map_err(|e| e.to_string())
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            E3 => "e3",
            E2 => "e2",
            E1 => "e1",
            NegE3 => "-e3",
            NegE2 => "-e2",
            NegE1 => "-e1",
        };
        write!(f, "{s}")
    }
}

/// Exact planar position λ·e2 + μ·e3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarPoint {
    #[serde(with = "ratio_serde")]
    pub lambda: Rat,
    #[serde(with = "ratio_serde")]
    pub mu: Rat,
}

impl PlanarPoint {
    pub fn origin() -> PlanarPoint {
        PlanarPoint { lambda: Rat::zero(), mu: Rat::zero() }
    }

    pub fn step(&self, dir: Direction, scale: &Rat) -> PlanarPoint {
        let (dl, dm) = dir.delta();
        PlanarPoint {
            lambda: &self.lambda + scale * rat(dl, 1),
            mu: &self.mu + scale * rat(dm, 1),
        }
    }

    /// Cartesian coordinates, only for rendering.
    pub fn to_xy(&self) -> (f64, f64) {
        let l = ratio_to_f64(&self.lambda);
        let m = ratio_to_f64(&self.mu);
        (0.5 * l + m, l * 3f64.sqrt() / 2.0)
    }
}

fn ratio_to_f64(r: &Rat) -> f64 {
    let n = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    n / d
}

mod ratio_serde {
    use super::Rat;
    use num_bigint::BigInt;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::str::FromStr;

    /// num/den emitted as JSON numbers when they fit in i64, decimal
    /// strings otherwise.
    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Part {
        Int(i64),
        Big(String),
    }

    fn to_part(b: &BigInt) -> Part {
        match i64::try_from(b.clone()) {
            Ok(v) => Part::Int(v),
            Err(_) => Part::Big(b.to_string()),
        }
    }

    fn from_part(p: Part) -> std::result::Result<BigInt, String> {
        match p {
            Part::Int(v) => Ok(BigInt::from(v)),
            Part::Big(s) => BigInt::from_str(&s).map_err(|e| e.to_string()),
        }
    }

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        (to_part(r.numer()), to_part(r.denom())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let (n, den) = <(Part, Part)>::deserialize(d)?;
        let n = from_part(n).map_err(D::Error::custom)?;
        let den = from_part(den).map_err(D::Error::custom)?;
        if den.sign() == num_bigint::Sign::NoSign {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rat::new(n, den))
    }
}

/// Direction of a finite edge leaving `from`, read off the corner boxes of
/// its two endpoint vertices. For a ray edge the fixed ray convention
/// applies: {x,y} exits -e2, {y,z} exits e2, {x,z} exits e1 (each choice
/// is the D-1 direction whose shrinking size is the one the ray loses).
pub fn edge_direction(c: &MVComplex, from: VertexId, edge: EdgeId) -> Result<Direction> {
    let e = &c.edges[edge];
    if !e.vertices.contains(&from) {
        return Err(Error::Domain(format!("edge {edge} is not incident to vertex {from}")));
    }
    if e.is_ray() {
        return ray_direction(c, edge);
    }
    let to = c
        .other_vertex(edge, from)
        .ok_or_else(|| Error::Internal("finite edge missing second vertex".into()))?;
    let a = &c.vertices[from].corner;
    let b = &c.vertices[to].corner;
    let sig = [
        b.x.cmp(&a.x),
        b.y.cmp(&a.y),
        b.z.cmp(&a.z),
    ];
    use Ordering::*;
    let dir = match sig {
        [Equal, Less, Greater] => E1,
        [Less, Equal, Greater] => E2,
        [Less, Greater, Equal] => E3,
        [Equal, Greater, Less] => NegE1,
        [Greater, Equal, Less] => NegE2,
        [Greater, Less, Equal] => NegE3,
        _ => {
            return Err(Error::Internal(format!(
                "edge {edge}: corner change {sig:?} is not a hexagonal direction"
            )))
        }
    };
    Ok(dir)
}

/// Ray direction by the fixed convention (see `edge_direction`).
pub fn ray_direction(c: &MVComplex, edge: EdgeId) -> Result<Direction> {
    let e = &c.edges[edge];
    if !e.is_ray() {
        return Err(Error::Domain(format!("edge {edge} is not a ray")));
    }
    let role = |f: FaceId| c.axis_roles.iter().position(|&r| r == f);
    match (role(e.pair.0), role(e.pair.1)) {
        (Some(i), Some(j)) => {
            let mut roles = [i, j];
            roles.sort_unstable();
            match roles {
                [0, 1] => Ok(NegE2),
                [1, 2] => Ok(E2),
                [0, 2] => Ok(E1),
                _ => unreachable!(),
            }
        }
        _ => Err(Error::Internal("ray edge is not an axis pair".into())),
    }
}

/// Vertex classification: `Boundary` if a ray is incident, otherwise one
/// of the eight interior types. The type id encodes the choice made in
/// each decreasing group: 1 + 4·[x-edge is e3] + 2·[y-edge is -e3] +
/// [z-edge is -e2].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexType {
    Boundary,
    Interior { type_id: u8, labels: [Direction; 3] },
}

pub fn vertex_type(c: &MVComplex, v: VertexId) -> Result<VertexType> {
    let edges = c.edges_at_vertex(v);
    if edges.iter().any(|&e| c.edges[e].is_ray()) {
        return Ok(VertexType::Boundary);
    }
    let mut by_group: [Option<Direction>; 3] = [None; 3];
    for &e in &edges {
        let d = edge_direction(c, v, e)?;
        let g = d.decreasing_group();
        if by_group[g].is_some() {
            return Err(Error::Internal(format!(
                "vertex {v}: two edges decrease coordinate {g}"
            )));
        }
        by_group[g] = Some(d);
    }
    let x = by_group[0].ok_or_else(|| Error::Internal(format!("vertex {v}: no x-decreasing edge")))?;
    let y = by_group[1].ok_or_else(|| Error::Internal(format!("vertex {v}: no y-decreasing edge")))?;
    let z = by_group[2].ok_or_else(|| Error::Internal(format!("vertex {v}: no z-decreasing edge")))?;
    let type_id = 1 + 4 * u8::from(x == E3) + 2 * u8::from(y == NegE3) + u8::from(z == NegE2);
    Ok(VertexType::Interior { type_id, labels: [x, y, z] })
}

/// Oriented boundary of one face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCycle {
    pub face: FaceId,
    pub vertices: Vec<VertexId>,
    pub closed: bool,
    /// Stair counts (n1, n2, n3) of the face-shape template, compact only.
    pub stairs: Option<[usize; 3]>,
}

/// Direction word along consecutive vertices of a chain (cyclic if closed).
fn chain_word(c: &MVComplex, chain: &[VertexId], closed: bool) -> Result<Vec<Direction>> {
    let m = chain.len();
    let steps = if closed { m } else { m.saturating_sub(1) };
    let mut word = Vec::with_capacity(steps);
    for i in 0..steps {
        let v = chain[i];
        let w = chain[(i + 1) % m];
        let triple_v = c.vertices[v].triple;
        let e = c
            .edges
            .iter()
            .position(|e| {
                e.vertices.contains(&v)
                    && e.vertices.contains(&w)
                    && triple_v.contains(&e.pair.0)
                    && triple_v.contains(&e.pair.1)
            })
            .ok_or_else(|| Error::Internal(format!("no edge between chain vertices {v},{w}")))?;
        word.push(edge_direction(c, v, e)?);
    }
    Ok(word)
}

/// Try to match a cyclic word against the compact-face template
/// e2 e1^n1 -e3 (-e2)^n2 -e1 e3^n3; returns the rotation offset that puts
/// the e2 edge first and the stair counts.
pub fn match_face_template(word: &[Direction]) -> Option<(usize, [usize; 3])> {
    let len = word.len();
    if len < 3 {
        return None;
    }
    let count = |d: Direction| word.iter().filter(|&&x| x == d).count();
    if count(E2) != 1 || count(NegE3) != 1 || count(NegE1) != 1 {
        return None;
    }
    let start = word.iter().position(|&d| d == E2).unwrap();
    let at = |i: usize| word[(start + i) % len];
    let mut i = 1;
    let run = |d: Direction, i: &mut usize| {
        let mut n = 0;
        while *i < len && at(*i) == d {
            *i += 1;
            n += 1;
        }
        n
    };
    let n1 = run(E1, &mut i);
    if i >= len || at(i) != NegE3 {
        return None;
    }
    i += 1;
    let n2 = run(NegE2, &mut i);
    if i >= len || at(i) != NegE1 {
        return None;
    }
    i += 1;
    let n3 = run(E3, &mut i);
    if i != len {
        return None;
    }
    Some((start, [n1, n2, n3]))
}

/// Boundary cycles of all faces, compact ones oriented and rotated to
/// match the face-shape template, axis faces oriented v_B→v_L (x role),
/// v_B→v_R (y role), v_R→v_L (z role).
pub fn face_cycles(c: &MVComplex) -> Result<Vec<FaceCycle>> {
    let mut out = Vec::with_capacity(c.faces.len());
    for f in 0..c.faces.len() {
        let (mut chain, closed) = c.face_chain(f)?;
        if closed {
            let word = chain_word(c, &chain, true)?;
            let (rot, stairs) = match match_face_template(&word) {
                Some(hit) => hit,
                None => {
                    chain.reverse();
                    let word = chain_word(c, &chain, true)?;
                    match_face_template(&word).ok_or_else(|| {
                        Error::Internal(format!("face {f}: boundary does not fit the template"))
                    })?
                }
            };
            chain.rotate_left(rot);
            out.push(FaceCycle { face: f, vertices: chain, closed: true, stairs: Some(stairs) });
        } else {
            let role = c.axis_roles.iter().position(|&r| r == f).ok_or_else(|| {
                Error::Internal(format!("open face chain {f} is not an axis face"))
            })?;
            let (want_first, _want_last) = match role {
                0 => (c.v_bottom(), c.v_left()),
                1 => (c.v_bottom(), c.v_right()),
                _ => (c.v_right(), c.v_left()),
            };
            if chain.first() != Some(&want_first) {
                chain.reverse();
            }
            if chain.first() != Some(&want_first) {
                return Err(Error::Internal(format!("face {f}: chain misses its corner vertex")));
            }
            out.push(FaceCycle { face: f, vertices: chain, closed: false, stairs: None });
        }
    }
    Ok(out)
}

/// One recursion step of the layout: which face was attached, where on the
/// current ascending path, and how many new vertices it contributed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutStep {
    pub face: FaceId,
    pub anchor_index: usize,
    pub path_span: usize,
    pub new_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ConstructionTrace {
    pub vertex_order: Vec<VertexId>,
    pub face_order: Vec<FaceId>,
    pub steps: Vec<LayoutStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramVertex {
    pub id: VertexId,
    #[serde(flatten)]
    pub pos: PlanarPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramEdge {
    /// Endpoint vertex ids; direction is read from v[0].
    pub v: [VertexId; 2],
    pub dir: Direction,
    pub edge: EdgeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramRay {
    pub v: VertexId,
    pub dir: Direction,
    pub edge: EdgeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "JsonDiagram", into = "JsonDiagram")]
pub struct CanonicalDiagram {
    pub vertices: Vec<DiagramVertex>,
    pub edges: Vec<DiagramEdge>,
    pub rays: Vec<DiagramRay>,
    pub faces: Vec<FaceCycle>,
    pub construction: ConstructionTrace,
}

/// Wire shape: finite edges and rays share one list, a ray having a null
/// second endpoint.
#[derive(Serialize, Deserialize, Clone)]
struct JsonEdge {
    v: (VertexId, Option<VertexId>),
    dir: Direction,
    edge: EdgeId,
}

#[derive(Serialize, Deserialize, Clone)]
struct JsonDiagram {
    vertices: Vec<DiagramVertex>,
    edges: Vec<JsonEdge>,
    faces: Vec<FaceCycle>,
    construction: ConstructionTrace,
}

impl From<CanonicalDiagram> for JsonDiagram {
    fn from(d: CanonicalDiagram) -> JsonDiagram {
        let mut edges: Vec<JsonEdge> = d
            .edges
            .into_iter()
            .map(|e| JsonEdge { v: (e.v[0], Some(e.v[1])), dir: e.dir, edge: e.edge })
            .collect();
        edges.extend(
            d.rays
                .into_iter()
                .map(|r| JsonEdge { v: (r.v, None), dir: r.dir, edge: r.edge }),
        );
        JsonDiagram { vertices: d.vertices, edges, faces: d.faces, construction: d.construction }
    }
}

impl From<JsonDiagram> for CanonicalDiagram {
    fn from(j: JsonDiagram) -> CanonicalDiagram {
        let mut edges = Vec::new();
        let mut rays = Vec::new();
        for e in j.edges {
            match e.v.1 {
                Some(w) => edges.push(DiagramEdge { v: [e.v.0, w], dir: e.dir, edge: e.edge }),
                None => rays.push(DiagramRay { v: e.v.0, dir: e.dir, edge: e.edge }),
            }
        }
        CanonicalDiagram { vertices: j.vertices, edges, rays, faces: j.faces, construction: j.construction }
    }
}

impl CanonicalDiagram {
    pub fn position(&self, v: VertexId) -> &PlanarPoint {
        &self.vertices.iter().find(|d| d.id == v).expect("vertex position").pos
    }
}

/// Construct the canonical diagram.
///
/// Step 1 places the chain of vertices containing the x-anchor on the e1
/// segment from the origin. Each recursion step picks the highest path
/// vertex with an unplaced e2-neighbor, lays the new face's top chain on
/// an e1 line through the closed-form intersection point, and splices it
/// into the ascending path; the loop ends when the path reaches v_R.
pub fn layout(c: &MVComplex) -> Result<CanonicalDiagram> {
    let nv = c.vertices.len();
    let v_b = c.v_bottom();
    let v_r = c.v_right();
    let v_l = c.v_left();

    let mut pos: Vec<Option<PlanarPoint>> = vec![None; nv];
    let mut trace = ConstructionTrace::default();

    // Step 1: the v_B -> v_L chain of the x-anchor face
    let x_cycle = face_cycles(c)?;
    let step1 = x_cycle
        .iter()
        .find(|fc| fc.face == c.axis_roles[0])
        .expect("x-anchor face cycle")
        .vertices
        .clone();
    if step1.first() != Some(&v_b) || step1.last() != Some(&v_l) {
        return Err(Error::Internal("step-1 chain does not run v_B to v_L".into()));
    }
    let n = step1.len() - 1;
    for (i, &v) in step1.iter().enumerate() {
        let frac = if n == 0 { Rat::zero() } else { rat(i as i64, n as i64) };
        pos[v] = Some(PlanarPoint::origin().step(E1, &frac));
        trace.vertex_order.push(v);
    }
    let mut path: Vec<VertexId> = step1;

    let mut guard = 0usize;
    while !path.contains(&v_r) {
        guard += 1;
        if guard > c.faces.len() + 1 {
            return Err(Error::Internal("layout does not terminate".into()));
        }
        // highest path index with an e2 edge to an unplaced vertex
        let mut found: Option<(usize, EdgeId, VertexId)> = None;
        for (k, &p) in path.iter().enumerate() {
            for e in c.edges_at_vertex(p) {
                if c.edges[e].is_ray() {
                    continue;
                }
                let w = c.other_vertex(e, p).unwrap();
                if pos[w].is_some() {
                    continue;
                }
                if edge_direction(c, p, e)? == E2 {
                    found = Some((k, e, w));
                }
            }
        }
        let Some((k, e_kw, w1)) = found else {
            return Err(Error::Internal("no e2 edge leaves the ascending path".into()));
        };
        if k + 1 >= path.len() {
            return Err(Error::Internal("e2 anchor sits at the end of the path".into()));
        }
        // the new face is shared by the e2 edge and the next path edge
        let p_k = path[k];
        let triple_k = c.vertices[p_k].triple;
        let e_next = c
            .edges
            .iter()
            .position(|e| {
                e.vertices.contains(&p_k)
                    && e.vertices.contains(&path[k + 1])
                    && triple_k.contains(&e.pair.0)
                    && triple_k.contains(&e.pair.1)
            })
            .ok_or_else(|| Error::Internal("missing path edge".into()))?;
        let pair_a = c.edges[e_kw].pair;
        let pair_b = c.edges[e_next].pair;
        let face = [pair_a.0, pair_a.1]
            .into_iter()
            .find(|f| *f == pair_b.0 || *f == pair_b.1)
            .ok_or_else(|| Error::Internal("e2 edge and path edge share no face".into()))?;

        // walk the face cycle away from w1 along the path
        let (cycle, closed) = c.face_chain(face)?;
        if !closed {
            return Err(Error::Internal("recursion reached an unbounded face".into()));
        }
        let len = cycle.len();
        let i0 = cycle.iter().position(|&v| v == p_k).unwrap();
        let next = cycle[(i0 + 1) % len];
        let prev = cycle[(i0 + len - 1) % len];
        let dir_step: isize = if next == w1 {
            -1
        } else if prev == w1 {
            1
        } else {
            return Err(Error::Internal("w1 is not a cycle neighbor of p_k".into()));
        };
        let at = |off: isize| -> VertexId {
            let idx = (i0 as isize + dir_step * off).rem_euclid(len as isize);
            cycle[idx as usize]
        };
        let mut j = 0usize;
        while k + j + 1 < path.len() && (j + 1) < len && at(j as isize + 1) == path[k + j + 1] {
            j += 1;
        }
        if j == 0 {
            return Err(Error::Internal("face shares no path edge beyond p_k".into()));
        }
        // the rest of the cycle is w_m ... w_1
        let m = len - (j + 1);
        if m == 0 {
            return Err(Error::Internal("face has no new vertices".into()));
        }
        let mut ws: Vec<VertexId> = (j + 1..len).map(|off| at(off as isize)).collect();
        ws.reverse(); // now w_1 ... w_m
        if ws[0] != w1 || ws.iter().any(|&w| pos[w].is_some()) {
            return Err(Error::Internal("face top chain disagrees with the e2 edge".into()));
        }

        // closed-form positions in the (e2, e3) basis
        let pk_pos = pos[p_k].clone().unwrap();
        let pkj_pos = pos[path[k + j]].clone().unwrap();
        let dl = &pkj_pos.lambda - &pk_pos.lambda;
        let dm = &pkj_pos.mu - &pk_pos.mu;
        if !dl.is_positive() || !(-&dm).is_positive() {
            return Err(Error::Internal(format!(
                "recursion step geometry violated: lambda={dl}, mu={dm}"
            )));
        }
        let s2 = if m == 1 {
            Rat::zero()
        } else {
            std::cmp::min(dl.clone(), -&dm) / rat(2, 1)
        };
        let w1_pos = pk_pos.step(E2, &(&dl - &s2));
        for (i, &w) in ws.iter().enumerate() {
            let frac = if m == 1 {
                Rat::zero()
            } else {
                rat(i as i64, (m - 1) as i64) * &s2
            };
            pos[w] = Some(w1_pos.step(E1, &frac));
            trace.vertex_order.push(w);
        }

        trace.face_order.push(face);
        trace.steps.push(LayoutStep {
            face,
            anchor_index: k,
            path_span: j,
            new_vertices: m,
        });

        let mut new_path = path[..=k].to_vec();
        new_path.extend_from_slice(&ws);
        new_path.extend_from_slice(&path[k + j..]);
        path = new_path;
    }

    if pos.iter().any(|p| p.is_none()) {
        return Err(Error::Internal("layout left unplaced vertices".into()));
    }

    let vertices: Vec<DiagramVertex> = (0..nv)
        .map(|v| DiagramVertex { id: v, pos: pos[v].clone().unwrap() })
        .collect();
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for (eid, e) in c.edges.iter().enumerate() {
        match e.vertices.as_slice() {
            [v] => rays.push(DiagramRay { v: *v, dir: ray_direction(c, eid)?, edge: eid }),
            [v, w] => {
                let (a, b) = (*v.min(w), *v.max(w));
                edges.push(DiagramEdge { v: [a, b], dir: edge_direction(c, a, eid)?, edge: eid });
            }
            _ => unreachable!(),
        }
    }
    Ok(CanonicalDiagram { vertices, edges, rays, faces: face_cycles(c)?, construction: trace })
}

/// The unique ascending path through v_R: the e2 chain of the y-anchor
/// face followed by the -e3 chain of the z-anchor face.
pub fn ascending_paths(c: &MVComplex) -> Result<Vec<VertexId>> {
    let cycles = face_cycles(c)?;
    let chain_of = |role: usize| -> Vec<VertexId> {
        cycles
            .iter()
            .find(|fc| fc.face == c.axis_roles[role])
            .expect("axis face cycle")
            .vertices
            .clone()
    };
    let mut p = chain_of(1); // v_B .. v_R
    let second = chain_of(2); // v_R .. v_L
    if p.last() != second.first() {
        return Err(Error::Internal("canonical path does not meet at v_R".into()));
    }
    p.extend_from_slice(&second[1..]);
    Ok(p)
}

/// Does the vertex sequence form an ascending path (v_B to v_L along
/// directions e1, e2, -e3)?
pub fn is_ascending(c: &MVComplex, path: &[VertexId]) -> bool {
    if path.first() != Some(&c.v_bottom()) || path.last() != Some(&c.v_left()) {
        return false;
    }
    for w in path.windows(2) {
        let (v, u) = (w[0], w[1]);
        let edge = c.edges.iter().position(|e| {
            e.vertices.len() == 2 && e.vertices.contains(&v) && e.vertices.contains(&u)
        });
        let Some(e) = edge else { return false };
        match edge_direction(c, v, e) {
            Ok(E1) | Ok(E2) | Ok(NegE3) => {}
            _ => return false,
        }
    }
    true
}

/// All ascending paths, by depth-first search over the allowed directions.
pub fn all_ascending_paths(c: &MVComplex) -> Result<Vec<Vec<VertexId>>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![c.v_bottom()]];
    while let Some(p) = stack.pop() {
        let last = *p.last().unwrap();
        if last == c.v_left() {
            out.push(p);
            continue;
        }
        for e in c.edges_at_vertex(last) {
            if c.edges[e].is_ray() {
                continue;
            }
            let w = c.other_vertex(e, last).unwrap();
            if p.contains(&w) {
                continue;
            }
            if matches!(edge_direction(c, last, e)?, E1 | E2 | NegE3) {
                let mut q = p.clone();
                q.push(w);
                stack.push(q);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// A single validation failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    EdgeOffDirection { edge: EdgeId },
    BadVertexType { vertex: VertexId, reason: String },
    FaceTemplate { face: FaceId, reason: String },
    CoincidentVertices { a: VertexId, b: VertexId },
    NonSimpleFace { face: FaceId },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::EdgeOffDirection { edge } => write!(f, "edge {edge} not parallel to its label"),
            Violation::BadVertexType { vertex, reason } => {
                write!(f, "vertex {vertex} has no admissible type: {reason}")
            }
            Violation::FaceTemplate { face, reason } => {
                write!(f, "face {face} violates the face template: {reason}")
            }
            Violation::CoincidentVertices { a, b } => write!(f, "vertices {a} and {b} coincide"),
            Violation::NonSimpleFace { face } => write!(f, "face {face} is not a simple polygon"),
        }
    }
}

/// Check a laid-out diagram: edges parallel to labels, interior vertices
/// among the eight types, compact faces matching the template, distinct
/// vertex positions, simple face polygons.
pub fn validate_diagram(c: &MVComplex, d: &CanonicalDiagram) -> Vec<Violation> {
    let mut out = Vec::new();

    for e in &d.edges {
        let a = d.position(e.v[0]);
        let b = d.position(e.v[1]);
        let (dl, dm) = e.dir.delta();
        let dl = rat(dl, 1);
        let dm = rat(dm, 1);
        let vl = &b.lambda - &a.lambda;
        let vm = &b.mu - &a.mu;
        // v = c * dir with c > 0
        let ok = if dl.is_zero() {
            vl.is_zero() && (&vm * &dm).is_positive()
        } else if dm.is_zero() {
            vm.is_zero() && (&vl * &dl).is_positive()
        } else {
            (&vl * &dm - &vm * &dl).is_zero() && (&vl * &dl).is_positive()
        };
        if !ok {
            out.push(Violation::EdgeOffDirection { edge: e.edge });
        }
    }

    for v in 0..c.vertices.len() {
        match vertex_type(c, v) {
            Ok(_) => {}
            Err(err) => out.push(Violation::BadVertexType { vertex: v, reason: err.to_string() }),
        }
    }

    for fc in &d.faces {
        if !fc.closed {
            continue;
        }
        match chain_word(c, &fc.vertices, true) {
            Ok(word) => {
                if match_face_template(&word).is_none() {
                    out.push(Violation::FaceTemplate {
                        face: fc.face,
                        reason: format!("word {:?}", word.iter().map(|d| d.to_string()).collect::<Vec<_>>()),
                    });
                } else if !face_polygon_simple(d, &fc.vertices) {
                    out.push(Violation::NonSimpleFace { face: fc.face });
                }
            }
            Err(err) => out.push(Violation::FaceTemplate { face: fc.face, reason: err.to_string() }),
        }
    }

    let mut seen: Vec<(&PlanarPoint, VertexId)> = d.vertices.iter().map(|v| (&v.pos, v.id)).collect();
    seen.sort_by(|a, b| {
        a.0.lambda
            .cmp(&b.0.lambda)
            .then_with(|| a.0.mu.cmp(&b.0.mu))
            .then_with(|| a.1.cmp(&b.1))
    });
    for w in seen.windows(2) {
        if w[0].0 == w[1].0 {
            out.push(Violation::CoincidentVertices { a: w[0].1, b: w[1].1 });
        }
    }

    out
}

fn cross(o: &PlanarPoint, a: &PlanarPoint, b: &PlanarPoint) -> Rat {
    // the (λ,μ) basis is non-degenerate, so sign tests work in it directly
    let (ax, ay) = (&a.lambda - &o.lambda, &a.mu - &o.mu);
    let (bx, by) = (&b.lambda - &o.lambda, &b.mu - &o.mu);
    &ax * &by - &ay * &bx
}

fn on_segment(p: &PlanarPoint, a: &PlanarPoint, b: &PlanarPoint) -> bool {
    if !cross(a, b, p).is_zero() {
        return false;
    }
    let within = |x: &Rat, lo: &Rat, hi: &Rat| {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        lo <= x && x <= hi
    };
    within(&p.lambda, &a.lambda, &b.lambda) && within(&p.mu, &a.mu, &b.mu)
}

fn segments_cross(a: &PlanarPoint, b: &PlanarPoint, p: &PlanarPoint, q: &PlanarPoint) -> bool {
    let d1 = cross(p, q, a);
    let d2 = cross(p, q, b);
    let d3 = cross(a, b, p);
    let d4 = cross(a, b, q);
    if ((d1.is_positive() && d2.is_negative()) || (d1.is_negative() && d2.is_positive()))
        && ((d3.is_positive() && d4.is_negative()) || (d3.is_negative() && d4.is_positive()))
    {
        return true;
    }
    (d1.is_zero() && on_segment(a, p, q))
        || (d2.is_zero() && on_segment(b, p, q))
        || (d3.is_zero() && on_segment(p, a, b))
        || (d4.is_zero() && on_segment(q, a, b))
}

fn face_polygon_simple(d: &CanonicalDiagram, cycle: &[VertexId]) -> bool {
    let n = cycle.len();
    for i in 0..n {
        let (a, b) = (d.position(cycle[i]), d.position(cycle[(i + 1) % n]));
        for j in i + 1..n {
            // skip adjacent segments, they share one endpoint by design
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let (p, q) = (d.position(cycle[j]), d.position(cycle[(j + 1) % n]));
            if segments_cross(a, b, p, q) {
                return false;
            }
        }
    }
    true
}

/// Output format of `render`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Dot,
    Json,
}

impl std::str::FromStr for RenderFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<RenderFormat> {
        match s {
            "svg" => Ok(RenderFormat::Svg),
            "dot" => Ok(RenderFormat::Dot),
            "json" => Ok(RenderFormat::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn render(d: &CanonicalDiagram, format: RenderFormat) -> Result<Vec<u8>> {
    match format {
        RenderFormat::Json => Ok(serde_json::to_vec_pretty(d)?),
        RenderFormat::Dot => Ok(render_dot(d).into_bytes()),
        RenderFormat::Svg => Ok(render_svg(d).into_bytes()),
    }
}

pub fn parse_diagram_json(bytes: &[u8]) -> Result<CanonicalDiagram> {
    Ok(serde_json::from_slice(bytes)?)
}

fn render_dot(d: &CanonicalDiagram) -> String {
    let mut s = String::from("graph mv {\n  node [shape=point];\n");
    for v in &d.vertices {
        let (x, y) = v.pos.to_xy();
        let rays: Vec<String> = d
            .rays
            .iter()
            .filter(|r| r.v == v.id)
            .map(|r| r.dir.index().to_string())
            .collect();
        let ray_attr = if rays.is_empty() {
            String::new()
        } else {
            format!(", ray=\"{}\"", rays.join(","))
        };
        s.push_str(&format!(
            "  {} [pos=\"{:.4},{:.4}!\"{}];\n",
            v.id, x, y, ray_attr
        ));
    }
    for e in &d.edges {
        s.push_str(&format!("  {} -- {} [hexdir={}];\n", e.v[0], e.v[1], e.dir.index()));
    }
    s.push_str("}\n");
    s
}

fn render_svg(d: &CanonicalDiagram) -> String {
    let pts: Vec<(f64, f64)> = d.vertices.iter().map(|v| v.pos.to_xy()).collect();
    let mean_len = {
        let mut total = 0.0;
        for e in &d.edges {
            let (x1, y1) = d.position(e.v[0]).to_xy();
            let (x2, y2) = d.position(e.v[1]).to_xy();
            total += ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt();
        }
        if d.edges.is_empty() { 1.0 } else { total / d.edges.len() as f64 }
    };
    let ray_len = 0.6 * mean_len;

    let mut lines = String::new();
    for e in &d.edges {
        let (x1, y1) = d.position(e.v[0]).to_xy();
        let (x2, y2) = d.position(e.v[1]).to_xy();
        lines.push_str(&format!(
            "  <line class=\"edge\" x1=\"{x1:.4}\" y1=\"{:.4}\" x2=\"{x2:.4}\" y2=\"{:.4}\" stroke=\"black\" stroke-width=\"0.02\"/>\n",
            -y1, -y2
        ));
    }
    let mut ray_pts = Vec::new();
    for r in &d.rays {
        let (x1, y1) = d.position(r.v).to_xy();
        let ang = r.dir.index() as f64 * std::f64::consts::PI / 3.0;
        let (x2, y2) = (x1 + ray_len * ang.cos(), y1 + ray_len * ang.sin());
        ray_pts.push((x2, y2));
        lines.push_str(&format!(
            "  <line class=\"ray\" x1=\"{x1:.4}\" y1=\"{:.4}\" x2=\"{x2:.4}\" y2=\"{:.4}\" stroke=\"black\" stroke-width=\"0.02\" stroke-dasharray=\"0.05,0.05\"/>\n",
            -y1, -y2
        ));
    }
    for (v, (x, y)) in d.vertices.iter().zip(&pts) {
        lines.push_str(&format!(
            "  <circle cx=\"{x:.4}\" cy=\"{:.4}\" r=\"0.035\" fill=\"black\"><title>v{}</title></circle>\n",
            -y, v.id
        ));
    }

    let all: Vec<(f64, f64)> = pts.iter().copied().chain(ray_pts).collect();
    let min_x = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min) - 0.2;
    let max_x = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max) + 0.2;
    let min_y = all.iter().map(|p| -p.1).fold(f64::INFINITY, f64::min) - 0.2;
    let max_y = all.iter().map(|p| -p.1).fold(f64::NEG_INFINITY, f64::max) + 0.2;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.4} {:.4} {:.4} {:.4}\">\n{}</svg>\n",
        min_x,
        min_y,
        max_x - min_x,
        max_y - min_y,
        lines
    )
}
