use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Checkpoint, DensityError, DensityReport};

/// Largest group the model will enumerate.
pub const MAX_GROUP_ORDER: usize = 10_000;

/// A permutation of `{0, …, degree-1}` as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    /// From an image list; `None` unless it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Permutation(images))
    }

    /// From disjoint or overlapping cycles on 0-based points, composed left
    /// to right as written.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Option<Self> {
        let mut acc = Self::identity(degree);
        for c in cycles {
            let mut img: Vec<u32> = (0..degree as u32).collect();
            for (k, &a) in c.iter().enumerate() {
                let b = c[(k + 1) % c.len()];
                *img.get_mut(a as usize)? = b;
            }
            acc = Permutation::from_images(img)?.compose(&acc);
        }
        Some(acc)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `+1` for even, `-1` for odd permutations.
    pub fn sign(&self) -> i8 {
        let mut seen = vec![false; self.0.len()];
        let mut transpositions = 0usize;
        for start in 0..self.0.len() {
            let mut len = 0usize;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            transpositions += len.saturating_sub(1);
        }
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Lengths of the nontrivial cycles, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            if len > 1 {
                out.push(len);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation on 1-based points; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push((i + 1).to_string());
                i = self.0[i] as usize;
            }
            write!(f, "({})", cyc.join(","))?;
            any = true;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Finite group `Γ` with a normal subgroup `N`, standing in for an algebraic
/// monodromy group and its identity component; the cosets of `N` play the
/// role of connected components.
#[derive(Clone, Debug)]
pub struct ComponentModel {
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    generators: Vec<usize>,
    subgroup: Vec<usize>,
    cosets: Vec<Vec<usize>>,
    coset_of: Vec<usize>,
}

fn closure(
    degree: usize,
    generators: &[Permutation],
) -> Result<Vec<Permutation>, DensityError> {
    let id = Permutation::identity(degree);
    let mut seen: HashMap<Permutation, ()> = HashMap::from([(id.clone(), ())]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = g.compose(s);
            if seen.insert(h.clone(), ()).is_none() {
                if out.len() >= MAX_GROUP_ORDER {
                    return Err(DensityError::GroupTooLarge);
                }
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(out)
}

impl ComponentModel {
    /// `Γ = ⟨generators⟩` and `N = ⟨normal_generators⟩`, both acting on
    /// `degree` points. Checks that `N ⊆ Γ` and that `N` is normal.
    pub fn new(
        degree: usize,
        generators: &[Permutation],
        normal_generators: &[Permutation],
    ) -> Result<Self, DensityError> {
        for p in generators.iter().chain(normal_generators) {
            if p.degree() != degree {
                return Err(DensityError::BadPermutation(p.to_string(), degree));
            }
        }
        let elements = closure(degree, generators)?;
        let index: HashMap<Permutation, usize> =
            elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        for n in normal_generators {
            if !index.contains_key(n) {
                return Err(DensityError::NotASubgroup(n.to_string()));
            }
        }
        let sub = closure(degree, normal_generators)?;
        let in_sub: BTreeSet<usize> = sub.iter().map(|p| index[p]).collect();
        for g in generators {
            let g_inv = g.inverse();
            for n in normal_generators {
                let c = g.compose(n).compose(&g_inv);
                if !in_sub.contains(&index[&c]) {
                    return Err(DensityError::NotNormal(n.to_string(), g.to_string()));
                }
            }
        }
        let subgroup: Vec<usize> = in_sub.into_iter().collect();
        let mut coset_of = vec![usize::MAX; elements.len()];
        let mut cosets = Vec::new();
        // element 0 is the identity, so coset 0 is N itself
        for g in 0..elements.len() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = subgroup
                .iter()
                .map(|&n| index[&elements[g].compose(&elements[n])])
                .collect();
            for &m in &members {
                coset_of[m] = cosets.len();
            }
            cosets.push(members);
        }
        let generators = generators.iter().map(|g| index[g]).collect();
        Ok(ComponentModel {
            elements,
            index,
            generators,
            subgroup,
            cosets,
            coset_of,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup.len()
    }

    /// Number of components `c = |Γ/N|`.
    pub fn component_count(&self) -> usize {
        self.cosets.len()
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Elements of coset `i`; coset 0 is `N`.
    pub fn coset(&self, i: usize) -> &[usize] {
        &self.cosets[i]
    }

    pub fn coset_of(&self, element: usize) -> usize {
        self.coset_of[element]
    }

    fn conjugate(&self, g: usize, x: usize) -> usize {
        let gp = &self.elements[g];
        self.index[&gp.compose(&self.elements[x]).compose(&gp.inverse())]
    }

    /// Closure of `seed` under conjugation by the generators.
    pub fn conjugation_closure(&self, seed: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = seed.into_iter().collect();
        let mut queue: VecDeque<usize> = set.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &g in &self.generators {
                let y = self.conjugate(g, x);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    pub fn conjugacy_class(&self, element: usize) -> BTreeSet<usize> {
        self.conjugation_closure([element])
    }

    /// Checked constructor for a conjugation-stable subset.
    pub fn class_stable_set(&self, elements: BTreeSet<usize>) -> Result<ClassStableSet, DensityError> {
        for &x in &elements {
            for &g in &self.generators {
                if !elements.contains(&self.conjugate(g, x)) {
                    return Err(DensityError::NotClassStable(self.elements[g].to_string()));
                }
            }
        }
        let is_coset_union = elements
            .iter()
            .all(|&x| self.cosets[self.coset_of[x]].iter().all(|y| elements.contains(y)));
        Ok(ClassStableSet {
            elements,
            is_coset_union,
        })
    }

    pub fn everything(&self) -> ClassStableSet {
        ClassStableSet {
            elements: (0..self.order()).collect(),
            is_coset_union: true,
        }
    }

    pub fn nothing(&self) -> ClassStableSet {
        ClassStableSet {
            elements: BTreeSet::new(),
            is_coset_union: true,
        }
    }
}

/// A subset of `Γ` stable under conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassStableSet {
    elements: BTreeSet<usize>,
    is_coset_union: bool,
}

impl ClassStableSet {
    pub fn elements(&self) -> &BTreeSet<usize> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_coset_union(&self) -> bool {
        self.is_coset_union
    }

    pub fn contains(&self, element: usize) -> bool {
        self.elements.contains(&element)
    }
}

fn contained_cosets<'a>(model: &'a ComponentModel, x: &'a ClassStableSet) -> impl Iterator<Item = usize> + 'a {
    (0..model.component_count()).filter(move |&i| model.coset(i).iter().all(|e| x.contains(*e)))
}

/// `|Ψ| / |Φ|` with `Ψ` the components lying entirely inside `x`.
pub fn chebotarev_density(model: &ComponentModel, x: &ClassStableSet) -> BigRational {
    BigRational::new(
        BigInt::from(contained_cosets(model, x).count()),
        BigInt::from(model.component_count()),
    )
}

/// First component (in coset order) contained in `x`.
pub fn find_component_in(model: &ComponentModel, x: &ClassStableSet) -> Option<usize> {
    contained_cosets(model, x).next()
}

/// Draw `trials` uniform elements of `Γ` from ChaCha8 seeded with `seed` and
/// report the fraction landing in `x`. Checkpoints every tenth of the run.
pub fn sample_frobenius(
    model: &ComponentModel,
    x: &ClassStableSet,
    trials: u64,
    seed: u64,
) -> Result<DensityReport, DensityError> {
    if trials == 0 {
        return Err(DensityError::ZeroTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = model.order() as u64;
    let step = (trials / 10).max(1);
    let mut hits = 0u64;
    let mut checkpoints = Vec::new();
    for t in 1..=trials {
        let g = rng.random_range(0..order) as usize;
        if x.contains(g) {
            hits += 1;
        }
        if t % step == 0 || t == trials {
            checkpoints.push(Checkpoint {
                x: t,
                count: hits,
                total: t,
            });
        }
    }
    Ok(DensityReport::from_counts(hits, trials, checkpoints))
}
