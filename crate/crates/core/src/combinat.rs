//! Permutations, cylinder diagrams, topological invariants from cycle
//! structure, and canonical forms under simultaneous relabeling.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numeric::Scalar;

/// Permutation of {1,..,l}, stored 0-based as a one-line image array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    img: Vec<usize>,
}

impl Permutation {
    pub fn identity(l: usize) -> Self {
        Permutation {
            img: (0..l).collect(),
        }
    }

    /// From a 0-based image array.
    pub fn from_images(img: Vec<usize>) -> Result<Self> {
        let l = img.len();
        let mut seen = vec![false; l];
        for &x in &img {
            if x >= l || seen[x] {
                return Err(Error::InvalidPermutation(format!("image {img:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { img })
    }

    /// From a 1-based image array as used in the JSON format.
    pub fn from_one_based(img: &[u64]) -> Result<Self> {
        let l = img.len();
        let mut out = Vec::with_capacity(l);
        for &x in img {
            if x == 0 || x as usize > l {
                return Err(Error::InvalidPermutation(format!("1-based image {img:?}")));
            }
            out.push(x as usize - 1);
        }
        Permutation::from_images(out)
    }

    pub fn one_based(&self) -> Vec<u64> {
        self.img.iter().map(|&x| x as u64 + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.img.len()
    }

    pub fn is_empty(&self) -> bool {
        self.img.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.img[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.img
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { img: inv }
    }

    /// self after other: (self * other)(x) = self(other(x)).
    pub fn compose(&self, other: &Self) -> Self {
        Permutation {
            img: other.img.iter().map(|&x| self.img[x]).collect(),
        }
    }

    /// Conjugate by lambda: lambda * self * lambda^-1.
    pub fn conjugate(&self, lambda: &Self) -> Self {
        let mut img = vec![0; self.img.len()];
        for x in 0..self.img.len() {
            img[lambda.img[x]] = lambda.img[self.img[x]];
        }
        Permutation { img }
    }

    /// Disjoint cycles covering {1,..,l}: each cycle starts at its smallest
    /// element, cycles sorted by smallest element. 0-based labels.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let l = self.img.len();
        let mut seen = vec![false; l];
        let mut out = Vec::new();
        for start in 0..l {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.img[start];
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.img[x];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle type as a descending partition of l.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

/// Pair of gluing permutations on l rectangle labels: sigma_right attaches
/// rectangle sigma_right(k) to the right side of k, sigma_up to the top.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CylinderDiagram {
    pub l: usize,
    pub sigma_right: Permutation,
    pub sigma_up: Permutation,
}

impl CylinderDiagram {
    pub fn new(sigma_right: Permutation, sigma_up: Permutation) -> Result<Self> {
        if sigma_right.len() != sigma_up.len() || sigma_right.is_empty() {
            return Err(Error::InvalidPermutation(
                "gluing permutations must have equal positive length".into(),
            ));
        }
        Ok(CylinderDiagram {
            l: sigma_right.len(),
            sigma_right,
            sigma_up,
        })
    }

    /// True iff the orbit of label 1 under both permutations and their
    /// inverses is all of {1,..,l}.
    pub fn is_transitive(&self) -> bool {
        let l = self.l;
        let mut seen = vec![false; l];
        let mut stack = vec![0usize];
        seen[0] = true;
        let inv_r = self.sigma_right.inverse();
        let inv_u = self.sigma_up.inverse();
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for p in [&self.sigma_right, &self.sigma_up, &inv_r, &inv_u] {
                let y = p.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == l
    }

    /// Commutator s1 s2 s1^-1 s2^-1, applied right to left.
    pub fn commutator(&self) -> Permutation {
        let s1 = &self.sigma_right;
        let s2 = &self.sigma_up;
        s1.compose(&s2.compose(&s1.inverse().compose(&s2.inverse())))
    }
}

/// Multiset of cone-angle multipliers k (cone angle 2*pi*k); k = 1 entries
/// are marked points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SingularityProfile {
    /// Multipliers sorted descending.
    pub multipliers: Vec<u64>,
}

impl SingularityProfile {
    pub fn new(mut multipliers: Vec<u64>) -> Self {
        multipliers.sort_unstable_by(|a, b| b.cmp(a));
        SingularityProfile { multipliers }
    }

    pub fn marked_point_count(&self) -> usize {
        self.multipliers.iter().filter(|&&k| k == 1).count()
    }

    pub fn sigma_count(&self) -> usize {
        self.multipliers.len()
    }

    /// Copy with marked points (k = 1) dropped. Geometry always retains
    /// marked points; this variant only affects reported profiles.
    pub fn without_marked_points(&self) -> Self {
        SingularityProfile {
            multipliers: self
                .multipliers
                .iter()
                .copied()
                .filter(|&k| k != 1)
                .collect(),
        }
    }

    /// Total cone order sum (k - 1).
    pub fn total_order(&self) -> u64 {
        self.multipliers.iter().map(|&k| k - 1).sum()
    }
}

/// One profile entry per commutator cycle, multiplier = cycle length.
pub fn singularity_profile(d: &CylinderDiagram) -> SingularityProfile {
    let c = d.commutator();
    SingularityProfile::new(c.cycles().iter().map(|cyc| cyc.len() as u64).collect())
}

/// Genus and total angle data: g = 1 + sum(k-1)/2, tau = 2*pi*(2g-2+|Sigma|),
/// and gamma = tau/pi (always an even integer).
#[derive(Debug, Clone)]
pub struct GenusTau {
    pub genus: u64,
    pub gamma: u64,
    pub tau: Scalar,
}

pub fn genus_and_tau(p: &SingularityProfile) -> Result<GenusTau> {
    let total = p.total_order();
    if total % 2 != 0 {
        return Err(Error::InvalidProfile);
    }
    let genus = 1 + total / 2;
    let gamma = 2 * (2 * genus - 2 + p.sigma_count() as u64);
    let tau = Scalar::from_integer(gamma as i64).mul(&Scalar::pi());
    Ok(GenusTau { genus, gamma, tau })
}

/// Twist data carried through canonicalization: positive integers indexed
/// by the cycles of one permutation, in the order of `cycles()`.
pub type TwistInts = Vec<u64>;

/// A quadruple (sigma_right, sigma_up, n_right, n_up) considered up to
/// simultaneous relabeling of the l rectangle labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quadruple {
    pub diagram: CylinderDiagram,
    pub n_right: Option<TwistInts>,
    pub n_up: Option<TwistInts>,
}

impl Quadruple {
    fn relabeled(&self, lambda: &Permutation) -> Quadruple {
        let s1 = self.diagram.sigma_right.conjugate(lambda);
        let s2 = self.diagram.sigma_up.conjugate(lambda);
        let remap = |perm_old: &Permutation, perm_new: &Permutation, n: &TwistInts| -> TwistInts {
            // twist entry of a new cycle = entry of the old cycle containing
            // the preimage of the new cycle's smallest element
            let old_cycles = perm_old.cycles();
            let mut old_cycle_of = vec![0usize; self.diagram.l];
            for (ci, cyc) in old_cycles.iter().enumerate() {
                for &x in cyc {
                    old_cycle_of[x] = ci;
                }
            }
            let inv = lambda.inverse();
            perm_new
                .cycles()
                .iter()
                .map(|cyc| n[old_cycle_of[inv.apply(cyc[0])]])
                .collect()
        };
        Quadruple {
            n_right: self
                .n_right
                .as_ref()
                .map(|n| remap(&self.diagram.sigma_right, &s1, n)),
            n_up: self
                .n_up
                .as_ref()
                .map(|n| remap(&self.diagram.sigma_up, &s2, n)),
            diagram: CylinderDiagram {
                l: self.diagram.l,
                sigma_right: s1,
                sigma_up: s2,
            },
        }
    }

    fn key(&self) -> (Vec<usize>, Vec<usize>, Option<TwistInts>, Option<TwistInts>) {
        (
            self.diagram.sigma_right.images().to_vec(),
            self.diagram.sigma_up.images().to_vec(),
            self.n_right.clone(),
            self.n_up.clone(),
        )
    }
}

/// Canonical representative plus the order of the stabilizer (isomorphic to
/// the translation-equivalence kernel of the surface; at most l).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonicalized {
    pub quadruple: Quadruple,
    pub stabilizer_order: u64,
}

/// Lexicographically least representative of the simultaneous-relabeling
/// orbit of (sigma_right, sigma_up, twists).
pub fn canonicalize(
    d: &CylinderDiagram,
    twists: Option<(&TwistInts, &TwistInts)>,
) -> Canonicalized {
    let q = Quadruple {
        diagram: d.clone(),
        n_right: twists.map(|(a, _)| a.clone()),
        n_up: twists.map(|(_, b)| b.clone()),
    };
    let mut best: Option<Quadruple> = None;
    let mut stab = 0u64;
    for lambda in permutations(d.l) {
        let cand = q.relabeled(&lambda);
        if cand.key() == q.key() {
            stab += 1;
        }
        if best.as_ref().map_or(true, |b| cand.key() < b.key()) {
            best = Some(cand);
        }
    }
    Canonicalized {
        quadruple: best.unwrap(),
        stabilizer_order: stab,
    }
}

/// All permutations of {0,..,l-1} in lexicographic order of image arrays.
pub fn permutations(l: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..l).collect();
    loop {
        out.push(Permutation { img: cur.clone() });
        let mut i = l.wrapping_sub(1);
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = l - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Lex-min one-line representative of a cycle type: cycles laid out as
/// consecutive ascending blocks, shortest first.
fn cycle_type_representative(partition: &[usize]) -> Permutation {
    let mut lens = partition.to_vec();
    lens.sort_unstable();
    let l: usize = lens.iter().sum();
    let mut img = vec![0usize; l];
    let mut start = 0;
    for len in lens {
        for off in 0..len {
            img[start + off] = start + (off + 1) % len;
        }
        start += len;
    }
    Permutation { img }
}

/// All partitions of l, each sorted descending.
fn partitions(l: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        let top = remaining.min(max);
        for next in (1..=top).rev() {
            cur.push(next);
            rec(remaining - next, next, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(l, l, &mut Vec::new(), &mut out);
    out
}

/// Centralizer of p inside the full symmetric group, by brute scan.
fn centralizer(p: &Permutation) -> Vec<Permutation> {
    permutations(p.len())
        .into_iter()
        .filter(|lam| p.conjugate(lam) == *p)
        .collect()
}

/// Every transitive pair up to simultaneous conjugation, exactly once, in a
/// deterministic order. The first component of each canonical pair is the
/// lex-min one-line representative of its cycle type, so only the
/// centralizer of that representative needs scanning for the second.
pub fn enumerate_diagrams(l: usize) -> Vec<CylinderDiagram> {
    assert!(l >= 1, "need at least one rectangle");
    let mut out = Vec::new();
    for part in partitions(l) {
        let s1 = cycle_type_representative(&part);
        let cent = centralizer(&s1);
        for s2 in permutations(l) {
            let d = CylinderDiagram {
                l,
                sigma_right: s1.clone(),
                sigma_up: s2.clone(),
            };
            if !d.is_transitive() {
                continue;
            }
            let minimal = cent
                .iter()
                .all(|lam| s2.conjugate(lam).images() >= s2.images());
            if minimal {
                out.push(d);
            }
        }
    }
    out.sort();
    out
}

/// Diagram text format: `l=3; r=(1 2)(3); u=(1 3)(2)` with fixed points
/// explicit; parser and printer round-trip.
pub fn format_diagram(d: &CylinderDiagram) -> String {
    let mut s = format!("l={}", d.l);
    for (tag, p) in [("r", &d.sigma_right), ("u", &d.sigma_up)] {
        s.push_str("; ");
        s.push_str(tag);
        s.push('=');
        for cyc in p.cycles() {
            s.push('(');
            for (i, x) in cyc.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                s.push_str(&format!("{}", x + 1));
            }
            s.push(')');
        }
    }
    s
}

pub fn parse_diagram(text: &str) -> Result<CylinderDiagram> {
    let err = |msg: &str| Error::Parse(format!("{msg} in diagram {text:?}"));
    let mut l: Option<usize> = None;
    let mut r: Option<Permutation> = None;
    let mut u: Option<Permutation> = None;
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, val) = part.split_once('=').ok_or_else(|| err("missing '='"))?;
        match key.trim() {
            "l" => l = Some(val.trim().parse::<usize>().map_err(|_| err("bad length"))?),
            "r" | "u" => {
                let ll = l.ok_or_else(|| err("l must come first"))?;
                let p = parse_cycles(val.trim(), ll)?;
                if key.trim() == "r" {
                    r = Some(p);
                } else {
                    u = Some(p);
                }
            }
            _ => return Err(err("unknown key")),
        }
    }
    let (Some(_), Some(r), Some(u)) = (l, r, u) else {
        return Err(err("need l, r and u"));
    };
    CylinderDiagram::new(r, u)
}

fn parse_cycles(s: &str, l: usize) -> Result<Permutation> {
    let err = |msg: &str| Error::Parse(format!("{msg} in cycles {s:?}"));
    let mut img: Vec<Option<usize>> = vec![None; l];
    let mut rest = s;
    while !rest.is_empty() {
        let Some(open) = rest.find('(') else {
            if rest.trim().is_empty() {
                break;
            }
            return Err(err("expected '('"));
        };
        let close = rest[open..]
            .find(')')
            .map(|c| open + c)
            .ok_or_else(|| err("unclosed cycle"))?;
        let body = &rest[open + 1..close];
        let elems: Vec<usize> = body
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| err("bad label")))
            .collect::<Result<_>>()?;
        if elems.is_empty() {
            return Err(err("empty cycle"));
        }
        for &e in &elems {
            if e == 0 || e > l {
                return Err(err("label out of range"));
            }
        }
        for i in 0..elems.len() {
            let from = elems[i] - 1;
            let to = elems[(i + 1) % elems.len()] - 1;
            if img[from].is_some() {
                return Err(err("repeated label"));
            }
            img[from] = Some(to);
        }
        rest = &rest[close + 1..];
    }
    let img: Vec<usize> = img
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| err("missing labels (fixed points must be explicit)"))?;
    Permutation::from_images(img)
}
