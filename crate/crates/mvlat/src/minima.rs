//! Finite axial sets, general position, Voronoi relative minima, minimal
//! k-element subsets, and the folded candidate sets of rank-1 lattices.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::numth::{gcd, sym_mod_u128};
use crate::{Error, Result};

/// A folded point: exact nonnegative integer coordinates in the positive
/// octant. Ordering is lexicographic, which every deterministic listing in
/// the crate relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[u64; 3]", into = "[u64; 3]")]
pub struct Point3 {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl From<[u64; 3]> for Point3 {
    fn from(c: [u64; 3]) -> Point3 {
        Point3::new(c[0], c[1], c[2])
    }
}

impl From<Point3> for [u64; 3] {
    fn from(p: Point3) -> [u64; 3] {
        [p.x, p.y, p.z]
    }
}

impl Point3 {
    pub const fn new(x: u64, y: u64, z: u64) -> Self {
        Point3 { x, y, z }
    }

    pub fn coord(&self, i: usize) -> u64 {
        match i {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    /// Closed dominance: self <= other in every coordinate.
    pub fn dominates(&self, other: &Point3) -> bool {
        self.x <= other.x && self.y <= other.y && self.z <= other.z
    }

    /// Strict dominance in every coordinate.
    pub fn strictly_inside(&self, corner: &Point3) -> bool {
        self.x > 0
            && self.y > 0
            && self.z > 0
            && self.x < corner.x
            && self.y < corner.y
            && self.z < corner.z
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Point3) -> Point3 {
        Point3::new(self.x.max(other.x), self.y.max(other.y), self.z.max(other.z))
    }
}

impl std::fmt::Display for Point3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// Corner of the box Π(A) spanned by a set of points.
pub fn box_corner(points: &[Point3]) -> Point3 {
    points
        .iter()
        .fold(Point3::new(0, 0, 0), |acc, p| acc.join(p))
}

/// A finite axial set: contains the three axis anchors (N1,0,0), (0,N2,0),
/// (0,0,N3) plus arbitrary further points of the open octant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxialSet {
    pub anchors: [u64; 3],
    pub points: Vec<Point3>,
}

impl AxialSet {
    /// Build from a point list; the anchors must be present among the points.
    pub fn new(anchors: [u64; 3], mut points: Vec<Point3>) -> Result<AxialSet> {
        if anchors.iter().any(|&n| n == 0) {
            return Err(Error::Domain("axial set: anchors must be positive".into()));
        }
        points.sort();
        points.dedup();
        for (i, p) in [
            Point3::new(anchors[0], 0, 0),
            Point3::new(0, anchors[1], 0),
            Point3::new(0, 0, anchors[2]),
        ]
        .iter()
        .enumerate()
        {
            if !points.contains(p) {
                return Err(Error::Domain(format!(
                    "axial set: missing axis anchor {} on axis {i}",
                    p
                )));
            }
        }
        if points.contains(&Point3::new(0, 0, 0)) {
            return Err(Error::Domain("axial set: contains the origin".into()));
        }
        Ok(AxialSet { anchors, points })
    }

    pub fn anchor_points(&self) -> [Point3; 3] {
        [
            Point3::new(self.anchors[0], 0, 0),
            Point3::new(0, self.anchors[1], 0),
            Point3::new(0, 0, self.anchors[2]),
        ]
    }
}

/// Rank-1 lattice parameters: the integer span of (1,a,b), (0,N,0), (0,0,N).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub a: u64,
    pub b: u64,
    pub n: u64,
}

impl LatticeSpec {
    pub fn new(a: u64, b: u64, n: u64) -> Result<LatticeSpec> {
        if a == 0 || b == 0 || n == 0 {
            return Err(Error::Domain("lattice: a, b, N must be positive".into()));
        }
        Ok(LatticeSpec { a, b, n })
    }

    /// Coprimality of both multipliers with N; required for general position.
    pub fn coprime(&self) -> bool {
        gcd(self.a % self.n, self.n).max(1) == 1 && gcd(self.b % self.n, self.n).max(1) == 1
            || self.n == 1
    }

    /// Fold of a single first coordinate x.
    pub fn fold(&self, x: u64) -> Point3 {
        Point3::new(
            x,
            sym_mod_u128(self.a as u128 * x as u128, self.n),
            sym_mod_u128(self.b as u128 * x as u128, self.n),
        )
    }
}

/// Outcome of the general-position check: either in general position or a
/// description of the first violation found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneralPosition {
    Yes,
    Violation(String),
}

impl GeneralPosition {
    pub fn is_general(&self) -> bool {
        matches!(self, GeneralPosition::Yes)
    }
}

/// Check the general-position conditions on an axial set:
/// (i) each coordinate plane carries exactly two points, off the origin and
/// on the two other axes; (ii) every other coordinate-parallel plane carries
/// at most one point.
pub fn is_general_position(set: &AxialSet) -> GeneralPosition {
    let names = ["x", "y", "z"];
    for i in 0..3 {
        let on_plane: Vec<&Point3> = set.points.iter().filter(|p| p.coord(i) == 0).collect();
        if on_plane.len() != 2 {
            return GeneralPosition::Violation(format!(
                "coordinate plane {}=0 contains {} points, expected 2",
                names[i],
                on_plane.len()
            ));
        }
        for p in &on_plane {
            let nonzero: Vec<usize> = (0..3).filter(|&j| p.coord(j) != 0).collect();
            if nonzero.len() != 1 {
                return GeneralPosition::Violation(format!(
                    "point {p} on plane {}=0 is not on a coordinate axis",
                    names[i]
                ));
            }
        }
        if on_plane[0].coord(i) == 0 && on_plane[1].coord(i) == 0 {
            // both are genuinely on the plane; they must occupy the two
            // remaining axes
            let axes: BTreeSet<usize> = on_plane
                .iter()
                .map(|p| (0..3).find(|&j| p.coord(j) != 0).unwrap())
                .collect();
            if axes.len() != 2 {
                return GeneralPosition::Violation(format!(
                    "plane {}=0 holds two points on the same axis",
                    names[i]
                ));
            }
        }
    }
    for i in 0..3 {
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        for p in &set.points {
            let v = p.coord(i);
            if v == 0 {
                continue;
            }
            if !seen.insert(v) {
                return GeneralPosition::Violation(format!(
                    "plane {}={v} contains two points",
                    names[i]
                ));
            }
        }
    }
    GeneralPosition::Yes
}

/// Voronoi relative minima by brute force: exactly the dominance-minimal
/// points of the set. Uses an x-sweep with a 2D staircase so large folds
/// stay cheap.
pub fn vrm_bruteforce(set: &AxialSet) -> Vec<Point3> {
    pareto_minimal(&set.points)
}

/// Dominance-minimal elements of a deduplicated point list.
pub fn pareto_minimal(points: &[Point3]) -> Vec<Point3> {
    let mut pts: Vec<Point3> = points.to_vec();
    pts.sort();
    pts.dedup();
    // staircase over (y,z) of everything processed so far; keys ascend in y
    // with strictly descending z
    let mut stair: Vec<(u64, u64)> = Vec::new();
    let mut out = Vec::new();
    for p in &pts {
        let dominated = match stair.partition_point(|&(y, _)| y <= p.y) {
            0 => false,
            idx => stair[idx - 1].1 <= p.z,
        };
        if dominated {
            continue;
        }
        out.push(*p);
        let idx = stair.partition_point(|&(y, _)| y < p.y);
        stair.insert(idx, (p.y, p.z));
        // drop staircase entries made redundant by the new point
        let j = idx + 1;
        while j < stair.len() && stair[j].1 >= p.z {
            stair.remove(j);
        }
        if idx > 0 && stair[idx - 1].0 == p.y {
            // same y, keep smaller z
            if stair[idx - 1].1 <= p.z {
                stair.remove(idx);
            } else {
                stair.remove(idx - 1);
            }
        }
    }
    out.sort();
    out
}

/// Which minimality predicate a pipeline uses.
///
/// `Literal` is the definition on abstract finite sets: the closed box of F
/// must avoid the other relative minima. `OpenInterior` is the lattice
/// variant: the open box of F must avoid every other point of the ground
/// set, which reproduces the Minkowski-polyhedron adjacency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinimalityMode {
    Literal,
    OpenInterior,
}

/// Is the k-subset `f` (of relative minima) minimal?
pub fn is_minimal_subset(
    f: &[Point3],
    vrm: &[Point3],
    ground: &[Point3],
    mode: MinimalityMode,
) -> bool {
    let corner = box_corner(f);
    match mode {
        MinimalityMode::Literal => vrm
            .iter()
            .all(|p| f.contains(p) || !p.dominates(&corner)),
        MinimalityMode::OpenInterior => ground
            .iter()
            .all(|p| f.contains(p) || !p.strictly_inside(&corner)),
    }
}

/// All minimal k-element subsets of the relative minima, k in {1,2,3}.
pub fn minimal_subsets(
    set: &AxialSet,
    ground: &[Point3],
    k: usize,
    mode: MinimalityMode,
) -> Result<Vec<Vec<Point3>>> {
    if !(1..=3).contains(&k) {
        return Err(Error::Domain(format!("minimal_subsets: k={k} not in 1..=3")));
    }
    let vrm = vrm_bruteforce(set);
    let mut out = Vec::new();
    match k {
        1 => {
            for p in &vrm {
                if is_minimal_subset(&[*p], &vrm, ground, mode) {
                    out.push(vec![*p]);
                }
            }
        }
        2 => {
            for (i, p) in vrm.iter().enumerate() {
                for q in &vrm[i + 1..] {
                    if is_minimal_subset(&[*p, *q], &vrm, ground, mode) {
                        out.push(vec![*p, *q]);
                    }
                }
            }
        }
        _ => {
            // every 2-subset of a minimal triple is a minimal pair, so only
            // triangles of the minimal-pair graph need the box test
            let pairs = minimal_subsets(set, ground, 2, mode)?;
            let pair_set: BTreeSet<(Point3, Point3)> =
                pairs.iter().map(|p| (p[0], p[1])).collect();
            for (i, p) in vrm.iter().enumerate() {
                for (j, q) in vrm.iter().enumerate().skip(i + 1) {
                    if !pair_set.contains(&(*p, *q)) {
                        continue;
                    }
                    for r in &vrm[j + 1..] {
                        if pair_set.contains(&(*p, *r))
                            && pair_set.contains(&(*q, *r))
                            && is_minimal_subset(&[*p, *q, *r], &vrm, ground, mode)
                        {
                            out.push(vec![*p, *q, *r]);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Fold a rank-1 lattice to its representative axial set and the extended
/// ground set used by the open-interior predicate.
///
/// Representatives: the three axis points plus (x, |ax|_N, |bx|_N) for
/// x in [1, N/2]. The extended set adds, for every x in [1, N], the folds
/// with the complementary residues N - |ax|_N and N - |bx|_N; this is the
/// finite witness set for open boxes inside [0,N]^3.
pub fn fold_rank1(spec: &LatticeSpec) -> Result<(AxialSet, Vec<Point3>)> {
    let n = spec.n;
    let axes = [
        Point3::new(n, 0, 0),
        Point3::new(0, n, 0),
        Point3::new(0, 0, n),
    ];
    let mut reps: Vec<Point3> = axes.to_vec();
    for x in 1..=n / 2 {
        reps.push(spec.fold(x));
    }
    let set = AxialSet::new([n, n, n], reps)?;

    let mut ground: BTreeSet<Point3> = set.points.iter().copied().collect();
    for x in 1..=n {
        let p = spec.fold(x);
        for y in [p.y, n - p.y] {
            for z in [p.z, n - p.z] {
                ground.insert(Point3::new(x, y, z));
            }
        }
    }
    Ok((set, ground.into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn s0() -> AxialSet {
        AxialSet::new(
            [3, 3, 3],
            vec![
                Point3::new(3, 0, 0),
                Point3::new(0, 3, 0),
                Point3::new(0, 0, 3),
                Point3::new(2, 1, 2),
                Point3::new(1, 2, 1),
                Point3::new(2, 3, 4),
            ],
        )
        .unwrap()
    }

    #[test]
    fn general_position_literal_examples() {
        // axis-only set is in general position
        let axes = AxialSet::new(
            [1, 1, 1],
            vec![
                Point3::new(1, 0, 0),
                Point3::new(0, 1, 0),
                Point3::new(0, 0, 1),
            ],
        )
        .unwrap();
        assert!(is_general_position(&axes).is_general());

        // constructed tie on the plane x=2
        let tied = AxialSet::new(
            [1, 1, 1],
            vec![
                Point3::new(1, 0, 0),
                Point3::new(0, 1, 0),
                Point3::new(0, 0, 1),
                Point3::new(2, 2, 2),
                Point3::new(2, 3, 3),
            ],
        )
        .unwrap();
        match is_general_position(&tied) {
            GeneralPosition::Violation(v) => assert!(v.contains("x=2"), "{v}"),
            _ => panic!("expected violation"),
        }
    }

    #[test]
    fn s0_fails_literal_gp_but_its_minima_pass() {
        // The 6-point set has gamma6 = (2,3,4) sharing the plane x=2 with
        // gamma4 and y=3 with gamma2, so the literal definition rejects it.
        // Its five relative minima form an axial set in general position,
        // which is what the complex pipeline checks.
        assert!(!is_general_position(&s0()).is_general());
        let vrm = vrm_bruteforce(&s0());
        let vrm_set = AxialSet::new([3, 3, 3], vrm).unwrap();
        assert!(is_general_position(&vrm_set).is_general());
    }

    #[test]
    fn s0_has_five_minima() {
        let vrm = vrm_bruteforce(&s0());
        assert_eq!(vrm.len(), 5);
        assert!(!vrm.contains(&Point3::new(2, 3, 4))); // gamma6 excluded
    }

    #[test]
    fn axis_only_minima() {
        let axes = AxialSet::new(
            [4, 5, 6],
            vec![
                Point3::new(4, 0, 0),
                Point3::new(0, 5, 0),
                Point3::new(0, 0, 6),
            ],
        )
        .unwrap();
        assert_eq!(vrm_bruteforce(&axes).len(), 3);
    }

    #[test]
    fn pareto_matches_naive() {
        // staircase sweep against the quadratic definition
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let pts: Vec<Point3> = (0..40)
                .map(|_| Point3::new(rng() % 12 + 1, rng() % 12 + 1, rng() % 12 + 1))
                .collect();
            let fast = pareto_minimal(&pts);
            let mut dedup = pts.clone();
            dedup.sort();
            dedup.dedup();
            let naive: Vec<Point3> = dedup
                .iter()
                .filter(|p| !dedup.iter().any(|q| q != *p && q.dominates(p)))
                .copied()
                .collect();
            assert_eq!(fast, naive);
        }
    }

    #[test]
    fn fold_examples() {
        let spec = LatticeSpec::new(1, 2, 5).unwrap();
        let (set, ground) = fold_rank1(&spec).unwrap();
        let mut pts = set.points.clone();
        pts.sort();
        assert_eq!(
            pts,
            vec![
                Point3::new(0, 0, 5),
                Point3::new(0, 5, 0),
                Point3::new(1, 1, 2),
                Point3::new(2, 2, 1),
                Point3::new(5, 0, 0),
            ]
        );
        assert!(ground.contains(&Point3::new(1, 1, 3)));

        let spec = LatticeSpec::new(2, 3, 7).unwrap();
        let (set, _) = fold_rank1(&spec).unwrap();
        let vrm = vrm_bruteforce(&set);
        assert_eq!(
            vrm,
            vec![
                Point3::new(0, 0, 7),
                Point3::new(0, 7, 0),
                Point3::new(1, 2, 3),
                Point3::new(2, 3, 1),
                Point3::new(3, 1, 2),
                Point3::new(7, 0, 0),
            ]
        );
    }

    #[test]
    fn lattice_minima_pass_general_position() {
        for n in 2..80u64 {
            for a in 1..6u64 {
                for b in 2..n {
                    if gcd(a, n) != 1 || gcd(b, n) != 1 {
                        continue;
                    }
                    let spec = LatticeSpec::new(a, b, n).unwrap();
                    let (set, _) = fold_rank1(&spec).unwrap();
                    let vrm = vrm_bruteforce(&set);
                    let vset = AxialSet::new([n, n, n], vrm).unwrap();
                    assert!(
                        is_general_position(&vset).is_general(),
                        "vrm of ({a},{b},{n}) not in general position"
                    );
                }
            }
        }
    }

    #[test]
    fn s0_minimal_subsets_literal() {
        let set = s0();
        let vrm = vrm_bruteforce(&set);
        let triples = minimal_subsets(&set, &vrm, 3, MinimalityMode::Literal).unwrap();
        assert_eq!(triples.len(), 5);
        let pairs = minimal_subsets(&set, &vrm, 2, MinimalityMode::Literal).unwrap();
        assert_eq!(pairs.len(), 9);
        let faces = minimal_subsets(&set, &vrm, 1, MinimalityMode::Literal).unwrap();
        assert_eq!(faces.len(), 5);
        assert!(minimal_subsets(&set, &vrm, 4, MinimalityMode::Literal).is_err());
    }

    #[test]
    fn open_interior_excludes_literal_ghost() {
        // For Γ(1,2,5) the triple {(0,0,5),(1,1,2),(2,2,1)} is literal-minimal
        // but the fold (1,1,3) sits strictly inside its box, so the
        // open-interior predicate drops it.
        let spec = LatticeSpec::new(1, 2, 5).unwrap();
        let (set, ground) = fold_rank1(&spec).unwrap();
        let ghost = vec![
            Point3::new(0, 0, 5),
            Point3::new(1, 1, 2),
            Point3::new(2, 2, 1),
        ];
        let vrm = vrm_bruteforce(&set);
        assert!(is_minimal_subset(&ghost, &vrm, &vrm, MinimalityMode::Literal));
        let triples = minimal_subsets(&set, &ground, 3, MinimalityMode::OpenInterior).unwrap();
        assert_eq!(triples.len(), 5);
        let mut ghost_sorted = ghost.clone();
        ghost_sorted.sort();
        assert!(!triples.contains(&ghost_sorted));
    }

    #[test]
    fn minimal_subsets_are_hereditary() {
        // any minimal subset of a minimal subset is minimal
        for (a, b, n) in [(1u64, 2, 5), (2, 3, 7), (2, 5, 21), (3, 7, 31)] {
            let spec = LatticeSpec::new(a, b, n).unwrap();
            let (set, ground) = fold_rank1(&spec).unwrap();
            let vrm = vrm_bruteforce(&set);
            for mode in [MinimalityMode::Literal, MinimalityMode::OpenInterior] {
                let g = if mode == MinimalityMode::Literal { &vrm } else { &ground };
                let triples = minimal_subsets(&set, g, 3, mode).unwrap();
                for t in &triples {
                    for drop in 0..3 {
                        let pair: Vec<Point3> = t
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != drop)
                            .map(|(_, p)| *p)
                            .collect();
                        assert!(is_minimal_subset(&pair, &vrm, g, mode));
                    }
                }
            }
        }
    }

    #[test]
    fn open_pairs_lie_in_one_or_two_triples() {
        for n in 3..70u64 {
            for (a, b) in [(1u64, 2u64), (2, 3), (3, 5)] {
                if b >= n || gcd(a, n) != 1 || gcd(b, n) != 1 {
                    continue;
                }
                let spec = LatticeSpec::new(a, b, n).unwrap();
                let (set, ground) = fold_rank1(&spec).unwrap();
                let pairs = minimal_subsets(&set, &ground, 2, MinimalityMode::OpenInterior).unwrap();
                let triples =
                    minimal_subsets(&set, &ground, 3, MinimalityMode::OpenInterior).unwrap();
                for p in &pairs {
                    let count = triples
                        .iter()
                        .filter(|t| p.iter().all(|x| t.contains(x)))
                        .count();
                    assert!(
                        (1..=2).contains(&count),
                        "pair {:?} of ({a},{b},{n}) lies in {count} triples",
                        p
                    );
                }
            }
        }
    }
}
