//! Weyl group combinatorics of a generalized Cartan matrix.
//!
//! Cosets `W/W_P` are identified through the orbit of a weight `λ` whose
//! stabilizer is exactly `W_P`: `⟨λ, α_i^∨⟩ = 0` for parabolic nodes and `1`
//! otherwise. Such a `λ` need not lie in the root lattice (and for affine
//! matrices has no root-lattice coordinates at all), but `λ − wλ` always does,
//! so each coset is tracked by the integer vector `λ − wλ`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::CoxeterError;
use crate::lattice::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, CoxeterError> {
        let n = entries.len();
        if n == 0 {
            return Err(CoxeterError::InvalidCartan("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(CoxeterError::InvalidCartan("matrix is not square".into()));
            }
            if row[i] != 2 {
                return Err(CoxeterError::InvalidCartan(format!("diagonal entry A[{i}][{i}] != 2")));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if a > 0 {
                    return Err(CoxeterError::InvalidCartan(format!("off-diagonal A[{i}][{j}] > 0")));
                }
                if (a == 0) != (entries[j][i] == 0) {
                    return Err(CoxeterError::InvalidCartan(format!(
                        "A[{i}][{j}] and A[{j}][{i}] must vanish together"
                    )));
                }
            }
        }
        Ok(CartanMatrix { entries })
    }

    /// Parses the row-major form `"2,-1;-4,2"`.
    pub fn parse(s: &str) -> Result<Self, CoxeterError> {
        let rows = s
            .split(';')
            .map(|row| row.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CoxeterError::Parse(s.to_string()))?;
        Self::new(rows)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// `⟨μ, α_i^∨⟩` for `μ` in root coordinates.
    pub fn coroot_pairing(&self, i: usize, mu: &[i64]) -> i64 {
        self.entries[i].iter().zip(mu).map(|(a, m)| a * m).sum()
    }

    /// `s_i μ = μ − ⟨μ, α_i^∨⟩ α_i` in root coordinates.
    pub fn reflect(&self, i: usize, mu: &[i64]) -> Vec<i64> {
        let mut out = mu.to_vec();
        out[i] -= self.coroot_pairing(i, mu);
        out
    }

    pub fn reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let id = i64::from(r == c);
                        if r == i {
                            id - self.entries[i][c]
                        } else {
                            id
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Finite type iff every principal minor is positive.
    pub fn is_finite_type(&self) -> bool {
        let n = self.rank();
        (1u32..(1 << n)).all(|mask| {
            let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let sub: Vec<Vec<i64>> = idx.iter().map(|&r| idx.iter().map(|&c| self.entries[r][c]).collect()).collect();
            determinant(&sub) > 0
        })
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.entries.iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Integer determinant by fraction-free elimination.
fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n).map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Subset of simple-root nodes (0-based) generating `W_P`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Parabolic(BTreeSet<usize>);

impl Parabolic {
    pub fn new<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        Parabolic(nodes.into_iter().collect())
    }

    /// Parses comma-separated 1-based node indices; the empty string is the Borel.
    pub fn parse_one_based(s: &str) -> Result<Self, CoxeterError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Parabolic::default());
        }
        s.split(',')
            .map(|x| match x.trim().parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i - 1),
                Ok(i) => Err(CoxeterError::ParabolicIndex(i)),
                Err(_) => Err(CoxeterError::Parse(s.to_string())),
            })
            .collect::<Result<BTreeSet<_>, _>>()
            .map(Parabolic)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

/// A minimal-length representative of a coset `wW_P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRep {
    /// ShortLex-least reduced word, `w = s_{word[0]} ⋯ s_{word[k-1]}` (0-based nodes).
    pub word: Vec<usize>,
    pub length: usize,
    /// Action of `w` on root-lattice coordinates.
    pub action: Vec<Vec<i64>>,
    /// `λ − wλ` in root coordinates; identifies the coset.
    pub shift: Vec<i64>,
}

impl CosetRep {
    pub fn name(&self) -> String {
        if self.word.is_empty() {
            "e".into()
        } else {
            self.word.iter().map(|i| format!("s{}", i + 1)).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionDatum {
    /// Positive real root `β` with `r_β w` shorter than `w`.
    pub root: Weight,
    /// Index of the coset of `r_β w`.
    pub target: usize,
}

/// The minimal coset representatives of `W/W_P` up to some length.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    pub cartan: CartanMatrix,
    pub parabolic: Parabolic,
    pub reps: Vec<CosetRep>,
    /// `Some(L)` when the enumeration was cut at length `L` with more cosets beyond.
    pub truncation: Option<usize>,
    index: HashMap<Vec<i64>, usize>,
}

impl CosetSystem {
    /// Enumerates minimal coset representatives of length ≤ `max_length` in
    /// order of (length, ShortLex word).
    pub fn enumerate(
        cartan: &CartanMatrix,
        parabolic: &Parabolic,
        max_length: Option<usize>,
    ) -> Result<Self, CoxeterError> {
        let n = cartan.rank();
        if let Some(i) = parabolic.nodes().find(|&i| i >= n) {
            return Err(CoxeterError::ParabolicIndex(i + 1));
        }
        if (0..n).all(|i| parabolic.contains(i)) {
            return Err(CoxeterError::FullParabolic);
        }
        if max_length.is_none() && !cartan.is_finite_type() {
            return Err(CoxeterError::Unbounded);
        }
        let mut sys = CosetSystem {
            cartan: cartan.clone(),
            parabolic: parabolic.clone(),
            reps: Vec::new(),
            truncation: None,
            index: HashMap::new(),
        };
        sys.push(CosetRep { word: vec![], length: 0, action: identity(n), shift: vec![0; n] });
        let mut level: Vec<usize> = vec![0];
        let mut length = 0;
        loop {
            // shift -> best word for the next level
            let mut next: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
            for &r in &level {
                let rep = &sys.reps[r];
                for i in 0..n {
                    let p = sys.pairing(&rep.shift, i);
                    if p > 0 {
                        let mut shift = rep.shift.clone();
                        shift[i] += p;
                        let mut word = vec![i];
                        word.extend_from_slice(&rep.word);
                        next.entry(shift)
                            .and_modify(|w| {
                                if word < *w {
                                    *w = word.clone();
                                }
                            })
                            .or_insert(word);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            if max_length == Some(length) {
                sys.truncation = Some(length);
                break;
            }
            length += 1;
            let mut new_level: Vec<(Vec<usize>, Vec<i64>)> = next.into_iter().map(|(s, w)| (w, s)).collect();
            new_level.sort();
            level = new_level
                .into_iter()
                .map(|(word, shift)| {
                    let action = word.iter().fold(identity(n), |acc, &i| mat_mul(&acc, &cartan.reflection_matrix(i)));
                    sys.push(CosetRep { word, length, action, shift })
                })
                .collect();
        }
        Ok(sys)
    }

    fn push(&mut self, rep: CosetRep) -> usize {
        let idx = self.reps.len();
        self.index.insert(rep.shift.clone(), idx);
        self.reps.push(rep);
        idx
    }

    fn lambda(&self, i: usize) -> i64 {
        i64::from(!self.parabolic.contains(i))
    }

    /// `⟨wλ, α_i^∨⟩` for the coset with the given shift `λ − wλ`.
    pub fn pairing(&self, shift: &[i64], i: usize) -> i64 {
        self.lambda(i) - self.cartan.coroot_pairing(i, shift)
    }

    /// Shift `λ − wλ` of an arbitrary word.
    pub fn shift_of_word(&self, word: &[usize]) -> Vec<i64> {
        let mut shift = vec![0; self.cartan.rank()];
        for &i in word.iter().rev() {
            let p = self.pairing(&shift, i);
            shift[i] += p;
        }
        shift
    }

    /// Index of the coset containing the given word, if enumerated.
    pub fn locate(&self, word: &[usize]) -> Option<usize> {
        self.index.get(&self.shift_of_word(word)).copied()
    }

    pub fn inversions(&self, idx: usize) -> Result<Vec<InversionDatum>, CoxeterError> {
        let rep = &self.reps[idx];
        let word = &rep.word;
        (0..word.len())
            .map(|j| {
                let mut root = vec![0i64; self.cartan.rank()];
                root[word[j]] = 1;
                for &i in word[..j].iter().rev() {
                    root = self.cartan.reflect(i, &root);
                }
                let mut shorter = word.clone();
                shorter.remove(j);
                let target = self.locate(&shorter).ok_or_else(|| CoxeterError::MissingTarget(rep.name()))?;
                debug_assert!(self.reps[target].length < rep.length);
                debug_assert!(root.iter().all(|&c| c >= 0));
                Ok(InversionDatum { root: Weight::from_i64s(&root), target })
            })
            .collect()
    }
}

/// Positive real roots of height ≤ `max_height`, by reflection closure of the
/// simple roots. Every positive real root other than a simple one has a simple
/// reflection lowering its height, so the bounded search is complete.
pub fn real_roots(cartan: &CartanMatrix, max_height: i64) -> Vec<Weight> {
    let n = cartan.rank();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut r = vec![0; n];
        r[i] = 1;
        if max_height >= 1 && seen.insert(r.clone()) {
            queue.push_back(r);
        }
    }
    while let Some(r) = queue.pop_front() {
        for i in 0..n {
            let s = cartan.reflect(i, &r);
            let height: i64 = s.iter().sum();
            if s.iter().all(|&c| c >= 0) && height <= max_height && seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
    out.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    out.iter().map(|r| Weight::from_i64s(r)).collect()
}
