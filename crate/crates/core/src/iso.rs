//! Combinatorial isomorphism and canonical certificates.
//!
//! Two schemes are isomorphic when a point bijection `phi` and a class
//! bijection `psi` with `psi(0) = 0` satisfy `R2[phi p][phi q] = psi(R1[p][q])`.
//!
//! Canonical labeling refines point colours and class colours together:
//! a point is recoloured by the multiset of (class colour, point colour)
//! pairs in its row, and a class by the multiset of point-colour pairs on
//! its cells. Both are invariant under renumbering the classes other than
//! class 0. Non-discrete colourings are split by individualizing each point
//! of the first smallest non-singleton cell; the certificate is the
//! lexicographically least leaf encoding, and automorphisms found at equal
//! leaves prune individualizations in the same orbit.

use std::fmt;

use crate::scheme::JordanScheme;

/// Canonical relation matrix: an 8-byte header (order and class count,
/// big endian) followed by the row-major class labels, one byte each when
/// there are at most 256 classes and two bytes otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    bytes: Vec<u8>,
}

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Search statistics of one canonical labeling run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: usize,
    pub leaves: usize,
    pub automorphisms: usize,
}

/// Canonical form of a scheme.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub certificate: Certificate,
    /// `order[k]` is the input point placed at position `k`.
    pub order: Vec<usize>,
    /// `labels[c]` is the canonical label of input class `c`.
    pub labels: Vec<usize>,
    pub stats: SearchStats,
}

/// Replaces each key by its rank among the distinct keys. Ranking by value
/// keeps colours independent of the input numbering.
fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key is present"))
        .collect()
}

fn distinct(colors: &[usize]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn pair(a: usize, b: usize) -> u64 {
    ((a as u64) << 32) | b as u64
}

struct Canonizer<'a> {
    n: usize,
    classes: usize,
    rel: &'a [usize],
    automorphisms: Vec<Vec<usize>>,
    first: Option<(Vec<u32>, Vec<usize>)>,
    best: Option<(Vec<u32>, Vec<usize>)>,
    stats: SearchStats,
}

impl<'a> Canonizer<'a> {
    fn new(scheme: &'a JordanScheme) -> Self {
        Canonizer {
            n: scheme.order(),
            classes: scheme.class_count(),
            rel: scheme.relation_slice(),
            automorphisms: Vec::new(),
            first: None,
            best: None,
            stats: SearchStats::default(),
        }
    }

    fn refine(&self, mut pc: Vec<usize>, mut cc: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
        let n = self.n;
        loop {
            let point_keys: Vec<(usize, Vec<u64>)> = (0..n)
                .map(|p| {
                    let mut row: Vec<u64> = (0..n).map(|q| pair(cc[self.rel[p * n + q]], pc[q])).collect();
                    row.sort_unstable();
                    (pc[p], row)
                })
                .collect();
            let npc = rank_keys(&point_keys);
            let mut cells: Vec<Vec<u64>> = vec![Vec::new(); self.classes];
            for p in 0..n {
                for q in 0..n {
                    cells[self.rel[p * n + q]].push(pair(npc[p], npc[q]));
                }
            }
            let class_keys: Vec<(usize, Vec<u64>)> = cells
                .into_iter()
                .enumerate()
                .map(|(c, mut v)| {
                    v.sort_unstable();
                    (cc[c], v)
                })
                .collect();
            let ncc = rank_keys(&class_keys);
            let stable = distinct(&npc) == distinct(&pc) && distinct(&ncc) == distinct(&cc);
            pc = npc;
            cc = ncc;
            if stable {
                return (pc, cc);
            }
        }
    }

    /// Row-major relation matrix in the given point order, classes labeled
    /// by first occurrence.
    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let n = self.n;
        let mut labels = vec![u32::MAX; self.classes];
        let mut next = 0;
        let mut out = Vec::with_capacity(n * n);
        for &p in order {
            for &q in order {
                let c = self.rel[p * n + q];
                if labels[c] == u32::MAX {
                    labels[c] = next;
                    next += 1;
                }
                out.push(labels[c]);
            }
        }
        out
    }

    fn orbit_contains(&self, prefix: &[usize], v: usize, targets: &[usize]) -> bool {
        let gens: Vec<&Vec<usize>> = self
            .automorphisms
            .iter()
            .filter(|g| prefix.iter().all(|&x| g[x] == x))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(x) = stack.pop() {
            if targets.contains(&x) {
                return true;
            }
            for g in &gens {
                let y = g[x];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    fn leaf(&mut self, pc: &[usize]) {
        self.stats.leaves += 1;
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&p| pc[p]);
        let enc = self.encode(&order);
        for (e, o) in self.first.iter().chain(self.best.iter()) {
            if *e == enc {
                let mut g = vec![0; self.n];
                for (a, b) in o.iter().zip(&order) {
                    g[*a] = *b;
                }
                if g.iter().enumerate().any(|(i, &x)| i != x) {
                    self.automorphisms.push(g);
                }
                break;
            }
        }
        if self.first.is_none() {
            self.first = Some((enc.clone(), order.clone()));
        }
        if self.best.as_ref().is_none_or(|(b, _)| enc < *b) {
            self.best = Some((enc, order));
        }
    }

    fn search(&mut self, pc: Vec<usize>, cc: Vec<usize>, prefix: &mut Vec<usize>) {
        self.stats.nodes += 1;
        let (pc, cc) = self.refine(pc, cc);
        let mut sizes = vec![0usize; self.n];
        for &c in &pc {
            sizes[c] += 1;
        }
        let Some(target) = (0..self.n).find(|&c| sizes[c] > 1) else {
            self.leaf(&pc);
            return;
        };
        let cell: Vec<usize> = (0..self.n).filter(|&p| pc[p] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if self.orbit_contains(prefix, v, &tried) {
                continue;
            }
            tried.push(v);
            let npc: Vec<usize> = pc
                .iter()
                .enumerate()
                .map(|(p, &c)| 2 * c + usize::from(c == target && p != v))
                .collect();
            prefix.push(v);
            self.search(npc, cc.clone(), prefix);
            prefix.pop();
        }
    }
}

fn certificate_bytes(n: usize, classes: usize, enc: &[u32]) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(8 + enc.len() * 2);
    bytes.extend_from_slice(&(n as u32).to_be_bytes());
    bytes.extend_from_slice(&(classes as u32).to_be_bytes());
    if classes <= 256 {
        bytes.extend(enc.iter().map(|&c| c as u8));
    } else {
        for &c in enc {
            bytes.extend_from_slice(&(c as u16).to_be_bytes());
        }
    }
    bytes
}

/// Canonical labeling of a scheme.
pub fn canonical_form(scheme: &JordanScheme) -> CanonicalForm {
    let mut canon = Canonizer::new(scheme);
    let n = canon.n;
    let mut cc = vec![1; canon.classes];
    cc[0] = 0;
    canon.search(vec![0; n], cc, &mut Vec::new());
    let (enc, order) = canon.best.take().expect("the search reaches a leaf");

    let mut labels = vec![usize::MAX; canon.classes];
    for (i, &p) in order.iter().enumerate() {
        for (j, &q) in order.iter().enumerate() {
            labels[canon.rel[p * n + q]] = enc[i * n + j] as usize;
        }
    }
    canon.stats.automorphisms = canon.automorphisms.len();
    CanonicalForm {
        certificate: Certificate {
            bytes: certificate_bytes(n, canon.classes, &enc),
        },
        order,
        labels,
        stats: canon.stats,
    }
}

pub fn canonical_certificate(scheme: &JordanScheme) -> Certificate {
    canonical_form(scheme).certificate
}

/// `point_map[p]` and `class_map[c]` are the images in the second scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub point_map: Vec<usize>,
    pub class_map: Vec<usize>,
}

/// Entrywise check of a candidate isomorphism.
pub fn verify_isomorphism(a: &JordanScheme, b: &JordanScheme, w: &IsoWitness) -> bool {
    let n = a.order();
    if b.order() != n || a.class_count() != b.class_count() {
        return false;
    }
    let d = a.class_count();
    let bijective = |map: &[usize], size: usize| {
        let mut seen = vec![false; size];
        map.len() == size && map.iter().all(|&x| x < size && !std::mem::replace(&mut seen[x], true))
    };
    if !bijective(&w.point_map, n) || !bijective(&w.class_map, d) || w.class_map[0] != 0 {
        return false;
    }
    (0..n).all(|p| (0..n).all(|q| b.relation(w.point_map[p], w.point_map[q]) == w.class_map[a.relation(p, q)]))
}

/// A verified isomorphism from `a` to `b`, or `None` if there is none.
pub fn find_isomorphism(a: &JordanScheme, b: &JordanScheme) -> Option<IsoWitness> {
    if a.order() != b.order() || a.class_count() != b.class_count() {
        return None;
    }
    let fa = canonical_form(a);
    let fb = canonical_form(b);
    if fa.certificate != fb.certificate {
        return None;
    }
    let n = a.order();
    let mut point_map = vec![0; n];
    for (pa, pb) in fa.order.iter().zip(&fb.order) {
        point_map[*pa] = *pb;
    }
    let mut inverse_labels = vec![0; b.class_count()];
    for (c, &l) in fb.labels.iter().enumerate() {
        inverse_labels[l] = c;
    }
    let class_map = fa.labels.iter().map(|&l| inverse_labels[l]).collect();
    let witness = IsoWitness { point_map, class_map };
    assert!(
        verify_isomorphism(a, b, &witness),
        "equal certificates must yield a valid isomorphism"
    );
    Some(witness)
}

pub fn are_isomorphic(a: &JordanScheme, b: &JordanScheme) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::build_scheme;
    use crate::signs::examples;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_relabel(s: &JordanScheme, rng: &mut ChaCha8Rng) -> JordanScheme {
        let mut perm: Vec<usize> = (0..s.order()).collect();
        perm.shuffle(rng);
        let mut rest: Vec<usize> = (1..s.class_count()).collect();
        rest.shuffle(rng);
        let mut classes = vec![0];
        classes.extend(rest);
        s.relabeled(&perm, &classes)
    }

    #[test]
    fn certificate_is_relabeling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for rank in 1..=2 {
            let s = build_scheme(&examples::by_rank(rank).unwrap()).unwrap();
            let c = canonical_certificate(&s);
            for _ in 0..5 {
                let t = random_relabel(&s, &mut rng);
                assert_eq!(canonical_certificate(&t), c);
                let w = find_isomorphism(&s, &t).unwrap();
                assert!(verify_isomorphism(&s, &t, &w));
            }
        }
    }

    #[test]
    fn different_orders_are_not_isomorphic() {
        let a = build_scheme(&examples::order2()).unwrap();
        let b = build_scheme(&examples::order4()).unwrap();
        assert!(!are_isomorphic(&a, &b));
        assert_ne!(canonical_certificate(&a), canonical_certificate(&b));
    }

    #[test]
    fn merged_classes_are_distinguished() {
        // the pentagon and the complete graph K5 as 2- and 3-class schemes
        let n = 5;
        let pentagon: Vec<Vec<usize>> = (0..n)
            .map(|p| {
                (0..n)
                    .map(|q| {
                        let d = (q + n - p) % n;
                        d.min(n - d)
                    })
                    .collect()
            })
            .collect();
        let a = JordanScheme::from_relation_matrix(&pentagon, 3).unwrap();
        // swapping distances 1 and 2 is a class bijection: isomorphic
        let swapped: Vec<Vec<usize>> = pentagon
            .iter()
            .map(|r| r.iter().map(|&c| [0, 2, 1][c]).collect())
            .collect();
        let b = JordanScheme::from_relation_matrix(&swapped, 3).unwrap();
        assert!(are_isomorphic(&a, &b));
        let complete: Vec<Vec<usize>> = (0..n).map(|p| (0..n).map(|q| usize::from(p != q)).collect()).collect();
        let k = JordanScheme::from_relation_matrix(&complete, 2).unwrap();
        assert!(!are_isomorphic(&a, &k));
    }

    #[test]
    fn hex_round_trip() {
        let s = build_scheme(&examples::order2()).unwrap();
        let c = canonical_certificate(&s);
        assert_eq!(hex::decode(c.to_hex()).unwrap(), c.as_bytes());
        assert_eq!(&c.as_bytes()[..8], &[0, 0, 0, 8, 0, 0, 0, 7]);
    }
}
