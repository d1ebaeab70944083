//! Generic finite-group machinery: closure from generators, multiplication
//! tables, and a brute-force isomorphism test.
//!
//! The isomorphism test compares cheap invariants first (order, element
//! order profile, abelianness, center and derived-subgroup sizes) and only
//! then runs a generator-mapping search. A candidate assignment of
//! generator images is accepted iff the subgroup of the direct product
//! generated by the paired generators has exactly the order of the group,
//! i.e. it is the graph of an isomorphism.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

/// Breadth-first closure of a generator list under `mul`. The result
/// contains the identity and is deterministic for a fixed generator order.
pub fn close_group<G, F>(identity: G, gens: &[G], mut mul: F, cap: usize) -> Result<Vec<G>>
where
    G: Clone + Eq + Hash,
    F: FnMut(&G, &G) -> G,
{
    let mut seen: HashSet<G> = HashSet::new();
    let mut out = Vec::new();
    let mut queue: VecDeque<G> = VecDeque::new();
    queue.push_back(identity);
    while let Some(g) = queue.pop_front() {
        if !seen.insert(g.clone()) {
            continue;
        }
        if seen.len() > cap {
            return Err(Error::CapExceeded {
                what: "group closure",
                cap,
            });
        }
        for h in gens {
            queue.push_back(mul(&g, h));
        }
        out.push(g);
    }
    Ok(out)
}

/// Dense multiplication table of a finite group, indexed by element
/// position in the defining element list.
#[derive(Debug, Clone)]
pub struct MulTable {
    pub n: usize,
    pub id: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    order: Vec<u32>,
}

impl MulTable {
    /// Build the table from a closed element list. The list must contain
    /// each element exactly once and be closed under `mul`.
    pub fn from_elements<G, F>(elems: &[G], mut mul: F) -> MulTable
    where
        G: Clone + Eq + Hash,
        F: FnMut(&G, &G) -> G,
    {
        let n = elems.len();
        let index: HashMap<&G, usize> = elems.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = mul(&elems[i], &elems[j]);
                table[i * n + j] = *index
                    .get(&prod)
                    .expect("element list not closed under multiplication")
                    as u32;
            }
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|i| table[e * n + i] == i as u32 && table[i * n + e] == i as u32))
            .expect("no identity element");
        let mut inv = vec![0u32; n];
        for i in 0..n {
            inv[i] = (0..n)
                .find(|&j| table[i * n + j] == id as u32)
                .expect("no inverse") as u32;
        }
        let mut order = vec![0u32; n];
        for i in 0..n {
            let mut k = 1u32;
            let mut acc = i;
            while acc != id {
                acc = table[acc * n + i] as usize;
                k += 1;
            }
            order[i] = k;
        }
        MulTable {
            n,
            id,
            mul: table,
            inv,
            order,
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    #[inline]
    pub fn order_of(&self, a: usize) -> u32 {
        self.order[a]
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Multiset of element orders.
    pub fn order_profile(&self) -> BTreeMap<u32, usize> {
        let mut profile = BTreeMap::new();
        for &o in &self.order {
            *profile.entry(o).or_insert(0) += 1;
        }
        profile
    }

    pub fn center_size(&self) -> usize {
        (0..self.n)
            .filter(|&a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
            .count()
    }

    pub fn derived_subgroup_size(&self) -> usize {
        let mut comms = HashSet::new();
        for a in 0..self.n {
            for b in 0..self.n {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                comms.insert(c);
            }
        }
        let gens: Vec<usize> = comms.into_iter().collect();
        self.subgroup_generated(&gens).len()
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        queue.push_back(self.id);
        while let Some(a) = queue.pop_front() {
            if seen[a] {
                continue;
            }
            seen[a] = true;
            out.push(a);
            for &g in gens {
                queue.push_back(self.mul(a, g));
            }
        }
        out
    }

    /// A small generating sequence: greedily extend by the highest-order
    /// element outside the current subgroup.
    pub fn generating_sequence(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut current = vec![self.id];
        while current.len() < self.n {
            let mut inside = vec![false; self.n];
            for &a in &current {
                inside[a] = true;
            }
            let next = (0..self.n)
                .filter(|&a| !inside[a])
                .max_by_key(|&a| (self.order[a], std::cmp::Reverse(a)))
                .expect("proper subgroup has complement");
            gens.push(next);
            current = self.subgroup_generated(&gens);
        }
        if gens.is_empty() {
            gens.push(self.id);
        }
        gens
    }
}

/// Whether the pairs `(g_i, c_i)` generate the graph of an isomorphism,
/// i.e. the subgroup of `G1 x G2` they generate has order exactly `n`.
fn pairs_generate_graph(t1: &MulTable, t2: &MulTable, gens: &[usize], images: &[usize]) -> bool {
    debug_assert_eq!(t1.n, t2.n);
    let n = t1.n;
    let encode = |a: usize, b: usize| a * n + b;
    let mut seen = HashSet::with_capacity(n + 1);
    let mut queue = VecDeque::new();
    queue.push_back((t1.id, t2.id));
    while let Some((a, b)) = queue.pop_front() {
        if !seen.insert(encode(a, b)) {
            continue;
        }
        if seen.len() > n {
            return false;
        }
        for (&g, &c) in gens.iter().zip(images.iter()) {
            queue.push_back((t1.mul(a, g), t2.mul(b, c)));
        }
    }
    // The projection to G1 is onto <gens> = G1, so |P| >= n; |P| = n makes
    // P the graph of an injective, hence bijective, homomorphism.
    seen.len() == n
}

/// Brute-force isomorphism test between two finite groups given by
/// multiplication tables.
pub fn isomorphic(t1: &MulTable, t2: &MulTable) -> bool {
    if t1.n != t2.n {
        return false;
    }
    if t1.order_profile() != t2.order_profile() {
        return false;
    }
    if t1.is_abelian() != t2.is_abelian() {
        return false;
    }
    // Finite abelian groups are determined by their order profile.
    if t1.is_abelian() {
        return true;
    }
    if t1.center_size() != t2.center_size() {
        return false;
    }
    if t1.derived_subgroup_size() != t2.derived_subgroup_size() {
        return false;
    }

    let gens = t1.generating_sequence();
    let mut candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            (0..t2.n)
                .filter(|&c| t2.order_of(c) == t1.order_of(g))
                .collect()
        })
        .collect();
    // Search the most constrained positions first.
    let mut perm: Vec<usize> = (0..gens.len()).collect();
    perm.sort_by_key(|&i| candidates[i].len());
    let gens: Vec<usize> = perm.iter().map(|&i| gens[i]).collect();
    candidates = perm.iter().map(|&i| candidates[i].clone()).collect();

    let mut images = vec![0usize; gens.len()];
    search(t1, t2, &gens, &candidates, &mut images, 0)
}

fn search(
    t1: &MulTable,
    t2: &MulTable,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut [usize],
    depth: usize,
) -> bool {
    if depth == gens.len() {
        return pairs_generate_graph(t1, t2, gens, images);
    }
    'next: for &c in &candidates[depth] {
        images[depth] = c;
        // Probe short word orders over the prefix chosen so far.
        for i in 0..=depth {
            for j in 0..=depth {
                let (a, b) = (gens[i], gens[j]);
                let (x, y) = (images[i], images[j]);
                if t2.order_of(t2.mul(x, y)) != t1.order_of(t1.mul(a, b)) {
                    continue 'next;
                }
                let comm1 = t1.mul(t1.mul(a, b), t1.inv(t1.mul(b, a)));
                let comm2 = t2.mul(t2.mul(x, y), t2.inv(t2.mul(y, x)));
                if t1.order_of(comm1) != t2.order_of(comm2) {
                    continue 'next;
                }
            }
        }
        if search(t1, t2, gens, candidates, images, depth + 1) {
            return true;
        }
    }
    false
}
