//! Slab decomposition of canonical diagrams into letters, word extraction,
//! the expected words of the a = 1 lattice family, and the 14-letter
//! alphabet audit for a = 2.
//!
//! Convention W-1 (calibrated against the a = 1 family, Γ(2,26,121) and
//! the a = 2 stable-configuration table, then frozen): cut lines run
//! along the e3 axis at every λ-level hosting at least one finite ±e3
//! edge; a slab is the band between consecutive cut levels, closed below
//! and open above, read bottom (v_B) first. Rays serialize exactly like
//! edge stubs.
//!
//! The letter of a slab abstracts the scaffolding between cut levels so
//! the alphabet stays finite: it records the base strip (the vertices on
//! the slab's own cut level with their e3 links), each base vertex's stub
//! directions, whether the ascending chains hanging off a base vertex
//! inside the band use an e2 step (this separates the two head letters),
//! and the positions and directions of edges passing through the whole
//! band. The full bordered content of every slab stays available on the
//! `Slab` value itself.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::complex::{MVComplex, VertexId};
use crate::diagram::{CanonicalDiagram, Direction, Rat};
use crate::minima::Point3;
use crate::numth::{cf_expand, gcd, planar_minima_2d};
use crate::{Error, Result};

/// An edge or ray crossing a slab boundary (or passing through the whole
/// band). `local` indexes the slab's own vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossItem {
    From { local: usize, dir: Direction },
    Pass { dir: Direction },
}

/// One horizontal band of the rotated diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slab {
    pub index: usize,
    /// Band [lo, hi) on the λ axis; None at the outer ends.
    pub lo: Option<(i64, i64)>,
    pub hi: Option<(i64, i64)>,
    /// Global vertex ids, ordered by (λ, μ).
    pub vertices: Vec<VertexId>,
    /// Edges with both endpoints in the band, by local index, with the
    /// direction read from the first endpoint.
    pub interior: Vec<(usize, usize, Direction)>,
    /// Crossings of the upper boundary, ordered by μ at the cut.
    pub up: Vec<CrossItem>,
    /// Crossings of the lower boundary, ordered by μ at the cut.
    pub down: Vec<CrossItem>,
    /// Calibrated letter serialization (see module docs).
    pub letter: String,
}

impl Slab {
    /// The letter class of this slab.
    pub fn letter(&self) -> String {
        self.letter.clone()
    }
}

/// Cut the diagram into slabs under convention W-1.
pub fn slab_decompose(_c: &MVComplex, d: &CanonicalDiagram) -> Result<Vec<Slab>> {
    let lambda = |v: VertexId| -> &Rat { &d.position(v).lambda };

    // cut levels: λ values hosting a finite ±e3 edge
    let mut cuts: Vec<Rat> = d
        .edges
        .iter()
        .filter(|e| matches!(e.dir, Direction::E3 | Direction::NegE3))
        .map(|e| lambda(e.v[0]).clone())
        .collect();
    cuts.sort();
    cuts.dedup();

    let band_of = |l: &Rat| -> usize { cuts.partition_point(|c| c <= l) };
    let n_bands = cuts.len() + 1;

    let mut vertices_by_band: Vec<Vec<VertexId>> = vec![Vec::new(); n_bands];
    for v in &d.vertices {
        vertices_by_band[band_of(&v.pos.lambda)].push(v.id);
    }
    for band in &mut vertices_by_band {
        band.sort_by(|&a, &b| {
            let (pa, pb) = (d.position(a), d.position(b));
            pa.lambda.cmp(&pb.lambda).then_with(|| pa.mu.cmp(&pb.mu)).then(a.cmp(&b))
        });
    }
    let local_index: BTreeMap<VertexId, usize> = vertices_by_band
        .iter()
        .flat_map(|band| band.iter().enumerate().map(|(i, &v)| (v, i)))
        .collect();

    // raw crossing records per band: (sort key μ-at-cut, item)
    let mut ups: Vec<Vec<(Rat, u8, CrossItem)>> = vec![Vec::new(); n_bands];
    let mut downs: Vec<Vec<(Rat, u8, CrossItem)>> = vec![Vec::new(); n_bands];
    let mut interior: Vec<Vec<(usize, usize, Direction)>> = vec![Vec::new(); n_bands];

    // μ of a line through (λ0, μ0) with direction dir, sampled at level l
    let mu_at = |p0: (&Rat, &Rat), dir: Direction, l: &Rat| -> Rat {
        let (dl, dm) = dir.delta();
        if dl == 0 {
            p0.1.clone()
        } else {
            let step = (l - p0.0) / Rat::from_integer(dl.into());
            p0.1 + step * Rat::from_integer(dm.into())
        }
    };

    for e in &d.edges {
        let (va, vb) = (e.v[0], e.v[1]);
        let (pa, pb) = (d.position(va), d.position(vb));
        // orient so the direction ascends in λ (or is e3 within a level)
        let (lo_v, hi_v, dir) = if pa.lambda <= pb.lambda {
            (va, vb, e.dir)
        } else {
            (vb, va, e.dir.opposite())
        };
        let (plo, phi) = (d.position(lo_v), d.position(hi_v));
        let (blo, bhi) = (band_of(&plo.lambda), band_of(&phi.lambda));
        if blo == bhi {
            let (mut i, mut j, mut dd) = (local_index[&lo_v], local_index[&hi_v], dir);
            // canonical first endpoint: the smaller local index
            if i > j {
                std::mem::swap(&mut i, &mut j);
                dd = dd.opposite();
            }
            interior[blo].push((i, j, dd));
            continue;
        }
        // the edge exits blo upward, enters bhi from below, passes the rest
        for band in blo..bhi {
            let cut = &cuts[band]; // upper boundary of `band`
            let key = mu_at((&plo.lambda, &plo.mu), dir, cut);
            let item = if band == blo {
                CrossItem::From { local: local_index[&lo_v], dir }
            } else {
                CrossItem::Pass { dir }
            };
            ups[band].push((key.clone(), dir.index(), item));
            let item = if band + 1 == bhi {
                CrossItem::From { local: local_index[&hi_v], dir }
            } else {
                CrossItem::Pass { dir }
            };
            downs[band + 1].push((key, dir.index(), item));
        }
    }

    for r in &d.rays {
        let p = d.position(r.v);
        let band = band_of(&p.lambda);
        let (dl, _) = r.dir.delta();
        let local = local_index[&r.v];
        if dl > 0 {
            // ascending ray: exits through every cut above its band
            for cut_idx in band..cuts.len() {
                let key = mu_at((&p.lambda, &p.mu), r.dir, &cuts[cut_idx]);
                let item = if cut_idx == band {
                    CrossItem::From { local, dir: r.dir }
                } else {
                    CrossItem::Pass { dir: r.dir }
                };
                ups[cut_idx].push((key.clone(), r.dir.index(), item));
                downs[cut_idx + 1].push((key, r.dir.index(), CrossItem::Pass { dir: r.dir }));
            }
            if band == n_bands - 1 {
                // top band: no cut above, record at the band itself
                ups[band].push((p.mu.clone(), r.dir.index(), CrossItem::From { local, dir: r.dir }));
            }
        } else if dl < 0 {
            let asc = r.dir.opposite();
            for cut_idx in (0..band).rev() {
                let key = mu_at((&p.lambda, &p.mu), r.dir, &cuts[cut_idx]);
                let item = if cut_idx + 1 == band {
                    CrossItem::From { local, dir: asc }
                } else {
                    CrossItem::Pass { dir: asc }
                };
                downs[cut_idx + 1].push((key.clone(), asc.index(), item));
                ups[cut_idx].push((key, asc.index(), CrossItem::Pass { dir: asc }));
            }
            if band == 0 {
                downs[0].push((p.mu.clone(), asc.index(), CrossItem::From { local, dir: asc }));
            }
        } else {
            return Err(Error::Internal("horizontal ray is not part of the convention".into()));
        }
    }

    let mut out = Vec::with_capacity(n_bands);
    let to_pair = |r: &Rat| -> Option<(i64, i64)> {
        Some((i64::try_from(r.numer().clone()).ok()?, i64::try_from(r.denom().clone()).ok()?))
    };
    for (i, verts) in vertices_by_band.into_iter().enumerate() {
        let mut up = std::mem::take(&mut ups[i]);
        up.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut down = std::mem::take(&mut downs[i]);
        down.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut inter = std::mem::take(&mut interior[i]);
        inter.sort();
        let lo = if i == 0 { None } else { Some(&cuts[i - 1]) };
        let hi = if i == cuts.len() { None } else { Some(&cuts[i]) };
        let letter = slab_letter(d, &verts, lo, hi);
        out.push(Slab {
            index: i,
            lo: lo.and_then(to_pair),
            hi: hi.and_then(to_pair),
            vertices: verts,
            interior: inter,
            up: up.into_iter().map(|x| x.2).collect(),
            down: down.into_iter().map(|x| x.2).collect(),
            letter,
        });
    }
    Ok(out)
}

/// The calibrated letter serialization of one band (see module docs).
///
/// Base vertices are the e3-incident vertices on the slab's own cut level
/// (for the head band: the vertices on its lowest level, i.e. v_B). A
/// base vertex records the direction families of its own edges and rays,
/// a mark when one of its own in-band edges ascends along e2 (this is
/// what separates the two head letters), and its e3 link to the next base
/// vertex. Edges passing through the whole band in the e1 family are
/// recorded between the base vertices they separate; e2-family passes are
/// artifacts of edge lengths in this particular layout and stay out of
/// the letter.
fn slab_letter(
    d: &CanonicalDiagram,
    verts: &[VertexId],
    lo: Option<&Rat>,
    hi: Option<&Rat>,
) -> String {
    use std::collections::BTreeSet;
    let base_level: Rat = match lo {
        Some(l) => l.clone(),
        None => d.position(verts[0]).lambda.clone(),
    };
    let band: BTreeSet<VertexId> = verts.iter().copied().collect();
    let has_e3 = |v: VertexId| {
        d.edges
            .iter()
            .any(|e| (e.v[0] == v || e.v[1] == v) && matches!(e.dir, Direction::E3 | Direction::NegE3))
    };
    let mut base: Vec<VertexId> = verts
        .iter()
        .copied()
        .filter(|&v| d.position(v).lambda == base_level && (lo.is_none() || has_e3(v)))
        .collect();
    if base.is_empty() {
        base = verts
            .iter()
            .copied()
            .filter(|&v| d.position(v).lambda == base_level)
            .collect();
    }

    let stub_class = |dir: Direction| -> Option<(u8, u8)> {
        // (direction family: 1 = e2, 2 = e1; side: 0 = up, 1 = down)
        match dir {
            Direction::E2 => Some((1, 0)),
            Direction::E1 => Some((2, 0)),
            Direction::NegE2 => Some((1, 1)),
            Direction::NegE1 => Some((2, 1)),
            _ => None,
        }
    };

    let mut s = String::from("L");
    let mu_of = |v: VertexId| d.position(v).mu.clone();

    // e1-family passes, keyed by μ at the base level
    let mut passes: Vec<Rat> = Vec::new();
    let mu_at = |p0: (&Rat, &Rat), dir: Direction, l: &Rat| -> Rat {
        let (dl, dm) = dir.delta();
        if dl == 0 {
            p0.1.clone()
        } else {
            let step = (l - p0.0) / Rat::from_integer(dl.into());
            p0.1 + step * Rat::from_integer(dm.into())
        }
    };
    if let Some(lo) = lo {
        for e in &d.edges {
            let (pa, pb) = (d.position(e.v[0]), d.position(e.v[1]));
            let (low, dir) = if pa.lambda <= pb.lambda {
                (pa, e.dir)
            } else {
                (pb, e.dir.opposite())
            };
            if !matches!(dir, Direction::E1 | Direction::NegE1) {
                continue;
            }
            let hi_l = if pa.lambda <= pb.lambda { &pb.lambda } else { &pa.lambda };
            if &low.lambda < lo && hi.is_some_and(|h| hi_l >= h) {
                passes.push(mu_at((&low.lambda, &low.mu), dir, lo));
            }
        }
        for r in &d.rays {
            if !matches!(r.dir, Direction::E1 | Direction::NegE1) {
                continue;
            }
            let p = d.position(r.v);
            let (dl, _) = r.dir.delta();
            let spans = (dl > 0 && &p.lambda < lo) || (dl < 0 && hi.is_some_and(|h| &p.lambda >= h));
            if spans {
                passes.push(mu_at((&p.lambda, &p.mu), r.dir, lo));
            }
        }
    }
    passes.sort();

    for (i, &v) in base.iter().enumerate() {
        // pass mark in the gap before this base vertex
        let gap = passes
            .iter()
            .any(|mu| mu < &mu_of(v) && (i == 0 || mu >= &mu_of(base[i - 1])));
        if gap {
            s.push_str("P;");
        }
        let mut stubs: BTreeSet<(u8, u8)> = BTreeSet::new();
        let mut e2_riser = false;
        let mut e3_link = false;
        for e in &d.edges {
            let dir = if e.v[0] == v {
                e.dir
            } else if e.v[1] == v {
                e.dir.opposite()
            } else {
                continue;
            };
            let other = if e.v[0] == v { e.v[1] } else { e.v[0] };
            match stub_class(dir) {
                Some(c) => {
                    stubs.insert(c);
                    if dir == Direction::E2 && band.contains(&other) {
                        e2_riser = true;
                    }
                }
                None => {
                    if base.get(i + 1) == Some(&other) {
                        e3_link = true;
                    }
                }
            }
        }
        for r in d.rays.iter().filter(|r| r.v == v) {
            if let Some(c) = stub_class(r.dir) {
                stubs.insert(c);
            }
        }
        s.push('V');
        for (fam, side) in stubs {
            s.push_str(&format!("{fam}{side}"));
        }
        if e2_riser {
            s.push('*');
        }
        if e3_link {
            s.push('-');
        }
        s.push(';');
    }
    if passes
        .iter()
        .any(|mu| base.last().map_or(true, |&v| mu >= &mu_of(v)))
    {
        s.push_str("P;");
    }
    s
}

/// Letter dictionary shared across a corpus run: classes are numbered in
/// first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterDict {
    pub classes: Vec<String>,
    #[serde(skip)]
    index: BTreeMap<String, usize>,
}

impl LetterDict {
    pub fn new() -> LetterDict {
        LetterDict::default()
    }

    pub fn intern(&mut self, serialization: String) -> usize {
        if self.index.is_empty() && !self.classes.is_empty() {
            for (i, c) in self.classes.iter().enumerate() {
                self.index.insert(c.clone(), i);
            }
        }
        if let Some(&id) = self.index.get(&serialization) {
            return id;
        }
        let id = self.classes.len();
        self.index.insert(serialization.clone(), id);
        self.classes.push(serialization);
        id
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// The word of a diagram: one letter-class id per slab, head first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramWord {
    pub letters: Vec<usize>,
}

pub fn word_of(c: &MVComplex, d: &CanonicalDiagram, dict: &mut LetterDict) -> Result<DiagramWord> {
    let slabs = slab_decompose(c, d)?;
    Ok(DiagramWord {
        letters: slabs.into_iter().map(|s| dict.intern(s.letter())).collect(),
    })
}

/// Expected word length of Γ(1,b,N): one head letter plus one letter per
/// partial quotient of N/b in shortest form.
pub fn white_expected(b: u64, n: u64) -> Result<usize> {
    check_white_domain(b, n)?;
    Ok(1 + cf_expand(n, b)?.len())
}

fn check_white_domain(b: u64, n: u64) -> Result<()> {
    if b < 2 || b * 2 > n {
        return Err(Error::Domain(format!("white: need 2 <= b <= N/2, got b={b}, N={n}")));
    }
    if gcd(b, n) != 1 {
        return Err(Error::Domain(format!("white: gcd({b},{n}) != 1")));
    }
    Ok(())
}

/// The vertex triples of MV(Γ(1,b,N)) predicted by the planar minima:
/// with γ̃_j = (|x_j|, |x_j|, |y_j|), the 2s+1 triples
/// (γz, γ̃1, γx), (γz, γ̃1, γy), (γ̃j, γ̃j+1, γx/γy), (γ̃s, γx, γy).
pub fn white_vertex_pattern(b: u64, n: u64) -> Result<Vec<[Point3; 3]>> {
    check_white_domain(b, n)?;
    let planar = planar_minima_2d(b, n)?;
    let s = planar.len() - 2;
    let gx = Point3::new(n, 0, 0);
    let gy = Point3::new(0, n, 0);
    let gz = Point3::new(0, 0, n);
    // γ̃_j lifts the planar minimum γ_j to the diagonal plane x = y
    let gt = |j: usize| -> Point3 {
        let (x, y) = planar[j];
        Point3::new(x, x, y)
    };
    let mut triples = Vec::with_capacity(2 * s + 1);
    triples.push([gz, gt(1), gx]);
    triples.push([gz, gt(1), gy]);
    for j in 1..s {
        triples.push([gt(j), gt(j + 1), gx]);
        triples.push([gt(j), gt(j + 1), gy]);
    }
    triples.push([gt(s), gx, gy]);
    for t in &mut triples {
        t.sort();
    }
    triples.sort();
    Ok(triples)
}

/// Result of the a = 2 alphabet audit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditReport {
    pub lattices: usize,
    pub distinct_classes: usize,
    /// Class ids seen in the head position.
    pub head_classes: Vec<usize>,
    /// Per class: occurrence count and the first lattice exhibiting it.
    pub occurrences: Vec<(usize, u64, (u64, u64))>,
    pub dict: LetterDict,
    pub words: Vec<((u64, u64), Vec<usize>)>,
}

impl AuditReport {
    /// The conjecture under audit bounds the alphabet by 14 letters.
    pub fn conjecture_consistent(&self) -> bool {
        self.distinct_classes <= 14
    }
}

/// Audit the letter alphabet over a corpus of a = 2 lattices. The corpus
/// is traversed in (b, N) order, so class ids are deterministic.
pub fn alphabet_audit(corpus: &[crate::minima::LatticeSpec]) -> Result<AuditReport> {
    let mut specs: Vec<&crate::minima::LatticeSpec> = corpus.iter().collect();
    specs.sort_by_key(|s| (s.b, s.n));
    let mut dict = LetterDict::new();
    let mut heads = Vec::new();
    let mut counts: BTreeMap<usize, (u64, (u64, u64))> = BTreeMap::new();
    let mut words = Vec::new();
    for spec in specs {
        if spec.a != 2 {
            return Err(Error::Domain("alphabet audit: corpus must have a = 2".into()));
        }
        let c = crate::complex::lattice_complex(spec)?;
        let d = crate::diagram::layout(&c)?;
        let word = word_of(&c, &d, &mut dict)?;
        if let Some(&h) = word.letters.first() {
            if !heads.contains(&h) {
                heads.push(h);
            }
        }
        for &l in &word.letters {
            let e = counts.entry(l).or_insert((0, (spec.b, spec.n)));
            e.0 += 1;
        }
        words.push(((spec.b, spec.n), word.letters));
    }
    heads.sort_unstable();
    Ok(AuditReport {
        lattices: words.len(),
        distinct_classes: dict.len(),
        head_classes: heads,
        occurrences: counts.into_iter().map(|(k, (n, ex))| (k, n, ex)).collect(),
        dict,
        words,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::lattice_complex;
    use crate::diagram::layout;
    use crate::minima::LatticeSpec;

    fn word_for(a: u64, b: u64, n: u64, dict: &mut LetterDict) -> Vec<usize> {
        let c = lattice_complex(&LatticeSpec::new(a, b, n).unwrap()).unwrap();
        let d = layout(&c).unwrap();
        word_of(&c, &d, dict).unwrap().letters
    }

    #[test]
    fn white_expected_examples() {
        assert_eq!(white_expected(2, 5).unwrap(), 3); // 5/2 = [2;2]
        assert_eq!(white_expected(26, 121).unwrap(), 6); // 121/26 = [4;1,1,1,8]
        assert_eq!(white_expected(3, 7).unwrap(), 3); // 7/3 = [2;3]
        assert!(white_expected(2, 4).is_err());
        assert!(white_expected(3, 5).is_err()); // b > N/2
    }

    #[test]
    fn white_pattern_for_2_5() {
        let pat = white_vertex_pattern(2, 5).unwrap();
        assert_eq!(pat.len(), 5);
        let c = lattice_complex(&LatticeSpec::new(1, 2, 5).unwrap()).unwrap();
        let mut actual: Vec<[Point3; 3]> = c
            .vertices
            .iter()
            .map(|v| {
                let mut t = v.triple.map(|f| c.faces[f]);
                t.sort();
                t
            })
            .collect();
        actual.sort();
        assert_eq!(pat, actual);
    }

    #[test]
    fn white_counts_follow_cf_length() {
        // vertex count 2s+1, edge count 3s+3, face count s+3
        for (b, n) in [(2u64, 5u64), (2, 7), (3, 7), (26, 121), (5, 13)] {
            let s = cf_expand(n, b).unwrap().len();
            let c = lattice_complex(&LatticeSpec::new(1, b, n).unwrap()).unwrap();
            assert_eq!(c.vertices.len(), 2 * s + 1, "({b},{n})");
            assert_eq!(c.edges.len(), 3 * s + 3);
            assert_eq!(c.faces.len(), s + 3);
        }
    }

    #[test]
    fn white_word_shape() {
        // head letter + s equal tail letters, the same classes across the family
        let mut dict = LetterDict::new();
        for (b, n) in [(2u64, 5u64), (2, 7), (3, 7), (2, 9), (4, 9), (5, 13), (26, 121)] {
            let s = cf_expand(n, b).unwrap().len();
            let w = word_for(1, b, n, &mut dict);
            assert_eq!(w.len(), 1 + s, "Γ(1,{b},{n})");
            assert_eq!(w.len(), white_expected(b, n).unwrap());
            assert!(w[1..].iter().all(|&l| l == w[1]), "tails equal: {w:?}");
            assert_ne!(w[0], w[1], "head differs from tail");
        }
        // one head class and one tail class over the whole family
        assert_eq!(dict.len(), 2);
    }

    #[test]
    fn gamma_2_26_121_word() {
        let mut dict = LetterDict::new();
        let w = word_for(2, 26, 121, &mut dict);
        assert_eq!(w.len(), 6, "six slabs");
        let mut distinct = w.clone();
        distinct.sort_unstable();
        distinct.dedup();
        assert_eq!(distinct.len(), 6, "six pairwise distinct letters: {w:?}");
    }

    #[test]
    fn slabs_partition_vertices_and_align() {
        for (a, b, n) in [(1u64, 2u64, 5u64), (2, 3, 7), (2, 26, 121), (3, 7, 100), (2, 5, 21)] {
            if crate::numth::gcd(a, n) != 1 || crate::numth::gcd(b, n) != 1 || n % b == 0 {
                continue;
            }
            let c = lattice_complex(&LatticeSpec::new(a, b, n).unwrap()).unwrap();
            let d = layout(&c).unwrap();
            let slabs = slab_decompose(&c, &d).unwrap();
            let total: usize = slabs.iter().map(|s| s.vertices.len()).sum();
            assert_eq!(total, c.vertices.len(), "slabs partition the vertices");
            // boundary sequences agree across every cut
            for w in slabs.windows(2) {
                let up: Vec<u8> = w[0]
                    .up
                    .iter()
                    .map(|i| match i {
                        CrossItem::From { dir, .. } | CrossItem::Pass { dir } => dir.index(),
                    })
                    .collect();
                let down: Vec<u8> = w[1]
                    .down
                    .iter()
                    .map(|i| match i {
                        CrossItem::From { dir, .. } | CrossItem::Pass { dir } => dir.index(),
                    })
                    .collect();
                assert_eq!(up, down, "cut interfaces must align for ({a},{b},{n})");
            }
            // every finite edge is an interior entry or a From at both ends
            let interior: usize = slabs.iter().map(|s| s.interior.len()).sum();
            let froms: usize = slabs
                .iter()
                .flat_map(|s| s.up.iter().chain(s.down.iter()))
                .filter(|i| matches!(i, CrossItem::From { .. }))
                .count();
            assert_eq!(
                2 * (d.edges.len() - interior) + d.rays.len(),
                froms,
                "edge accounting for ({a},{b},{n})"
            );
        }
    }

    #[test]
    fn degenerate_star_has_slabs() {
        let c = lattice_complex(&LatticeSpec::new(1, 1, 3).unwrap()).unwrap();
        let d = layout(&c).unwrap();
        let slabs = slab_decompose(&c, &d).unwrap();
        assert!(!slabs.is_empty());
        let total: usize = slabs.iter().map(|s| s.vertices.len()).sum();
        assert_eq!(total, c.vertices.len());
    }

    #[test]
    fn equivalent_complexes_equal_words() {
        //two lattices with equivalent complexes produce identical words
        let mut dict = LetterDict::new();
        let w1 = word_for(2, 3, 7, &mut dict);
        let w2 = word_for(2, 3, 7, &mut dict);
        assert_eq!(w1, w2);
    }

    #[test]
    fn empty_audit() {
        let report = alphabet_audit(&[]).unwrap();
        assert_eq!(report.distinct_classes, 0);
        assert!(report.conjecture_consistent());
    }
}
