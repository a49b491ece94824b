//! Finite posets: construction from cover relations, order queries, and
//! the two decompositions used by the structure theorem.
//!
//! A poset is decomposed twice. First into connected components (classes
//! of the transitive closure of comparability). Second, within each
//! component, maximal chains are grouped into classes of the relation
//! "share a strictly ordered pair", transitively closed; the union of
//! the chains in a class is a chain region. Distinct regions of one
//! component overlap only in elements that are minimal or maximal, and
//! never in a strictly ordered pair.
//!
//! Elements are identified by strings externally and by dense indices
//! internally. Elements are sorted at construction, so index order is
//! identifier order and every reported set is deterministic.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate element identifier `{0}`")]
    DuplicateElement(String),
    #[error("unknown element identifier `{0}` in cover relation")]
    UnknownElement(String),
    #[error("cycle detected: `{0}` and `{1}` are mutually reachable")]
    CycleDetected(String, String),
}

/// Partition of the element set into connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn members(&self, component: usize) -> &[usize] {
        &self.components[component]
    }

    pub fn component_of(&self, element: usize) -> usize {
        self.component_of[element]
    }
}

/// Chain regions of one connected component.
///
/// `regions[j]` is the sorted element set of region `j`; `chain_classes[j]`
/// indexes into the component's maximal chain list. Regions are sorted by
/// their element lists so the numbering is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPartition {
    regions: Vec<Vec<usize>>,
    chain_classes: Vec<Vec<usize>>,
}

impl RegionPartition {
    pub fn count(&self) -> usize {
        self.regions.len()
    }

    pub fn members(&self, region: usize) -> &[usize] {
        &self.regions[region]
    }

    pub fn chain_class(&self, region: usize) -> &[usize] {
        &self.chain_classes[region]
    }

    pub fn contains(&self, region: usize, element: usize) -> bool {
        self.regions[region].binary_search(&element).is_ok()
    }
}

/// A finite poset with precomputed closure, covers, components, maximal
/// chains, and chain regions. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FinitePoset {
    elements: Vec<String>,
    leq: Vec<bool>,
    covers: Vec<(usize, usize)>,
    comparable_pairs: Vec<(usize, usize)>,
    components: ComponentPartition,
    chains: Vec<Vec<Vec<usize>>>,
    regions: Vec<RegionPartition>,
    min_chain_size: usize,
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.leq == other.leq
    }
}
impl Eq for FinitePoset {}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // attach the larger root to the smaller so class
            // representatives are the minimum element
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

impl FinitePoset {
    /// Builds a poset whose order is the reflexive-transitive closure of
    /// the given cover pairs. The input need not be a Hasse reduction;
    /// redundant pairs are normalized away and covers are re-derived.
    pub fn from_covers<S: AsRef<str>>(
        elements: &[S],
        covers: &[(S, S)],
    ) -> Result<Self, PosetError> {
        let mut names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(PosetError::DuplicateElement(w[0].clone()));
            }
        }
        let n = names.len();
        let index_of = |name: &str| -> Result<usize, PosetError> {
            names
                .binary_search_by(|probe| probe.as_str().cmp(name))
                .map_err(|_| PosetError::UnknownElement(name.to_string()))
        };

        let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, b) in covers {
            let (i, j) = (index_of(a.as_ref())?, index_of(b.as_ref())?);
            if i != j {
                edges[i].push(j);
            }
        }

        // reflexive-transitive closure by DFS from each element
        let mut leq = vec![false; n * n];
        for start in 0..n {
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                if !leq[start * n + x] {
                    leq[start * n + x] = true;
                    stack.extend(edges[x].iter().copied());
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(PosetError::CycleDetected(names[i].clone(), names[j].clone()));
                }
            }
        }

        // covers = transitive reduction of the closure
        let mut reduced = Vec::new();
        for x in 0..n {
            'pair: for y in 0..n {
                if x == y || !leq[x * n + y] {
                    continue;
                }
                for z in 0..n {
                    if z != x && z != y && leq[x * n + z] && leq[z * n + y] {
                        continue 'pair;
                    }
                }
                reduced.push((x, y));
            }
        }
        reduced.sort_unstable();

        let mut comparable_pairs = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if leq[x * n + y] {
                    comparable_pairs.push((x, y));
                }
            }
        }
        comparable_pairs.sort_unstable();

        let components = Self::compute_components(n, &reduced);
        let (chains, regions, min_chain_size) =
            Self::compute_chains_and_regions(n, &leq, &reduced, &components);

        Ok(Self {
            elements: names,
            leq,
            covers: reduced,
            comparable_pairs,
            components,
            chains,
            regions,
            min_chain_size,
        })
    }

    fn compute_components(n: usize, covers: &[(usize, usize)]) -> ComponentPartition {
        let mut uf = UnionFind::new(n);
        for &(a, b) in covers {
            uf.union(a, b);
        }
        let mut roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        let mut reps: Vec<usize> = roots.clone();
        reps.sort_unstable();
        reps.dedup();
        let mut components = vec![Vec::new(); reps.len()];
        let mut component_of = vec![0; n];
        for x in 0..n {
            let c = reps.binary_search(&roots[x]).unwrap();
            components[c].push(x);
            component_of[x] = c;
        }
        roots.clear();
        ComponentPartition {
            components,
            component_of,
        }
    }

    fn compute_chains_and_regions(
        n: usize,
        leq: &[bool],
        covers: &[(usize, usize)],
        components: &ComponentPartition,
    ) -> (Vec<Vec<Vec<usize>>>, Vec<RegionPartition>, usize) {
        let mut successors: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut has_pred = vec![false; n];
        for &(a, b) in covers {
            successors[a].push(b);
            has_pred[b] = true;
        }
        for s in &mut successors {
            s.sort_unstable();
        }

        let mut all_chains = Vec::new();
        let mut all_regions = Vec::new();
        let mut min_size = if n == 0 { 0 } else { usize::MAX };

        for c in 0..components.count() {
            // every maximal chain is a Hasse path from a minimal element
            // to a maximal element
            let mut chains: Vec<Vec<usize>> = Vec::new();
            for &start in components.members(c) {
                if has_pred[start] {
                    continue;
                }
                let mut path = vec![start];
                Self::extend_chains(&successors, &mut path, &mut chains);
            }
            chains.sort();
            for chain in &chains {
                min_size = min_size.min(chain.len());
            }

            // chains are totally ordered, so sharing a strict pair is
            // the same as sharing at least two elements
            let mut uf = UnionFind::new(chains.len());
            for i in 0..chains.len() {
                for j in (i + 1)..chains.len() {
                    if Self::share_two(&chains[i], &chains[j]) {
                        uf.union(i, j);
                    }
                }
            }
            let mut class_of_root: std::collections::BTreeMap<usize, usize> =
                std::collections::BTreeMap::new();
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for i in 0..chains.len() {
                let r = uf.find(i);
                let k = *class_of_root.entry(r).or_insert_with(|| {
                    classes.push(Vec::new());
                    classes.len() - 1
                });
                classes[k].push(i);
            }
            let mut regions: Vec<(Vec<usize>, Vec<usize>)> = classes
                .into_iter()
                .map(|class| {
                    let mut members: Vec<usize> =
                        class.iter().flat_map(|&i| chains[i].iter().copied()).collect();
                    members.sort_unstable();
                    members.dedup();
                    (members, class)
                })
                .collect();
            regions.sort();
            let (region_sets, chain_classes): (Vec<_>, Vec<_>) = regions.into_iter().unzip();

            all_chains.push(chains);
            all_regions.push(RegionPartition {
                regions: region_sets,
                chain_classes,
            });
        }
        let _ = leq;
        if min_size == usize::MAX {
            min_size = 0;
        }
        (all_chains, all_regions, min_size)
    }

    fn extend_chains(successors: &[Vec<usize>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("path never empty");
        if successors[last].is_empty() {
            out.push(path.clone());
            return;
        }
        for &next in &successors[last] {
            path.push(next);
            Self::extend_chains(successors, path, out);
            path.pop();
        }
    }

    fn share_two(a: &[usize], b: &[usize]) -> bool {
        let (mut i, mut j, mut shared) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    shared += 1;
                    if shared >= 2 {
                        return true;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        false
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn identifier(&self, element: usize) -> &str {
        &self.elements[element]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements
            .binary_search_by(|probe| probe.as_str().cmp(name))
            .ok()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// The interval `{u : x <= u <= y}`, empty unless `x <= y`.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&u| self.leq(x, u) && self.leq(u, y))
            .collect()
    }

    /// Covering pairs of the order (its transitive reduction), sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// All pairs `(x, y)` with `x <= y`, sorted; these index the basis
    /// units of the incidence algebra.
    pub fn comparable_pairs(&self) -> &[(usize, usize)] {
        &self.comparable_pairs
    }

    pub fn is_minimal(&self, x: usize) -> bool {
        (0..self.len()).all(|y| !self.lt(y, x))
    }

    pub fn is_maximal(&self, x: usize) -> bool {
        (0..self.len()).all(|y| !self.lt(x, y))
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.is_minimal(x)).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.is_maximal(x)).collect()
    }

    pub fn components(&self) -> &ComponentPartition {
        &self.components
    }

    /// Maximal chains of one component, each ascending, sorted as lists.
    pub fn maximal_chains(&self, component: usize) -> &[Vec<usize>] {
        &self.chains[component]
    }

    pub fn regions(&self, component: usize) -> &RegionPartition {
        &self.regions[component]
    }

    /// Minimum cardinality over all maximal chains (0 for the empty poset).
    pub fn min_maximal_chain_size(&self) -> usize {
        self.min_chain_size
    }

    /// The unique `(component, region)` containing the strictly ordered
    /// pair `x < y`, if the pair is strictly ordered.
    pub fn region_of_strict_pair(&self, x: usize, y: usize) -> Option<(usize, usize)> {
        if !self.lt(x, y) {
            return None;
        }
        let c = self.components.component_of(x);
        let reg = &self.regions[c];
        (0..reg.count())
            .find(|&j| reg.contains(j, x) && reg.contains(j, y))
            .map(|j| (c, j))
    }

    /// Renders a set of element indices as sorted identifiers.
    pub fn names(&self, set: &[usize]) -> Vec<String> {
        let mut v: Vec<String> = set.iter().map(|&x| self.elements[x].clone()).collect();
        v.sort();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn idx(p: &FinitePoset, name: &str) -> usize {
        p.index_of(name).unwrap()
    }

    #[test]
    fn two_component_example_order() {
        let p = fixtures::two_component();
        assert!(p.leq(idx(&p, "a"), idx(&p, "d")));
        assert!(p.leq(idx(&p, "g"), idx(&p, "i")));
        assert!(!p.comparable(idx(&p, "b"), idx(&p, "e")));
        assert!(!p.comparable(idx(&p, "a"), idx(&p, "g")));
    }

    #[test]
    fn intervals() {
        let p = fixtures::two_component();
        let g = idx(&p, "g");
        let i = idx(&p, "i");
        assert_eq!(p.names(&p.interval(g, i)), ["g", "h", "i"]);
        assert_eq!(p.names(&p.interval(g, g)), ["g"]);
        assert!(p.interval(i, g).is_empty());
    }

    #[test]
    fn minimal_and_maximal() {
        let p = fixtures::two_component();
        assert_eq!(p.names(&p.minimal_elements()), ["a", "g"]);
        assert_eq!(p.names(&p.maximal_elements()), ["d", "e", "f", "i"]);
    }

    #[test]
    fn antichain_extremes() {
        let p = FinitePoset::from_covers(&["x", "y", "z"], &[]).unwrap();
        assert_eq!(p.minimal_elements().len(), 3);
        assert_eq!(p.maximal_elements().len(), 3);
        assert_eq!(p.components().count(), 3);
        assert_eq!(p.min_maximal_chain_size(), 1);
    }

    #[test]
    fn three_chain_extremes() {
        let p = fixtures::three_chain();
        assert_eq!(p.names(&p.minimal_elements()), ["x"]);
        assert_eq!(p.names(&p.maximal_elements()), ["z"]);
        assert_eq!(p.min_maximal_chain_size(), 3);
    }

    #[test]
    fn single_element() {
        let p = FinitePoset::from_covers(&["x"], &[]).unwrap();
        assert!(p.leq(0, 0));
        assert_eq!(p.maximal_chains(0), &[vec![0]]);
        assert_eq!(p.min_maximal_chain_size(), 1);
    }

    #[test]
    fn cycle_is_rejected() {
        let err = FinitePoset::from_covers(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap_err();
        assert_eq!(err, PosetError::CycleDetected("x".into(), "y".into()));
    }

    #[test]
    fn duplicate_and_unknown_rejected() {
        assert_eq!(
            FinitePoset::from_covers::<&str>(&["x", "x"], &[]).unwrap_err(),
            PosetError::DuplicateElement("x".into())
        );
        assert_eq!(
            FinitePoset::from_covers(&["x"], &[("x", "w")]).unwrap_err(),
            PosetError::UnknownElement("w".into())
        );
    }

    #[test]
    fn redundant_covers_are_normalized() {
        let direct = fixtures::three_chain();
        let redundant =
            FinitePoset::from_covers(&["x", "y", "z"], &[("x", "y"), ("y", "z"), ("x", "z")])
                .unwrap();
        assert_eq!(direct, redundant);
        assert_eq!(redundant.covers().len(), 2);
    }

    #[test]
    fn components_of_two_component_example() {
        let p = fixtures::two_component();
        let c = p.components();
        assert_eq!(c.count(), 2);
        assert_eq!(p.names(c.members(0)), ["a", "b", "c", "d", "e", "f"]);
        assert_eq!(p.names(c.members(1)), ["g", "h", "i"]);
    }

    #[test]
    fn maximal_chains_of_two_component_example() {
        let p = fixtures::two_component();
        let chains0: Vec<Vec<String>> = p
            .maximal_chains(0)
            .iter()
            .map(|c| c.iter().map(|&x| p.identifier(x).to_string()).collect())
            .collect();
        assert_eq!(
            chains0,
            vec![
                vec!["a".to_string(), "b".into(), "d".into()],
                vec!["a".to_string(), "c".into(), "e".into()],
                vec!["a".to_string(), "c".into(), "f".into()],
            ]
        );
        let chains1: Vec<Vec<String>> = p
            .maximal_chains(1)
            .iter()
            .map(|c| c.iter().map(|&x| p.identifier(x).to_string()).collect())
            .collect();
        assert_eq!(chains1, vec![vec!["g".to_string(), "h".into(), "i".into()]]);
        assert_eq!(p.min_maximal_chain_size(), 3);
    }

    #[test]
    fn regions_of_two_component_example() {
        let p = fixtures::two_component();
        let r = p.regions(0);
        assert_eq!(r.count(), 2);
        assert_eq!(p.names(r.members(0)), ["a", "b", "d"]);
        assert_eq!(p.names(r.members(1)), ["a", "c", "e", "f"]);
        assert_eq!(r.chain_class(0).len(), 1);
        assert_eq!(r.chain_class(1).len(), 2);
        let r1 = p.regions(1);
        assert_eq!(r1.count(), 1);
        assert_eq!(p.names(r1.members(0)), ["g", "h", "i"]);
    }

    #[test]
    fn diamond_is_one_region() {
        let p = fixtures::diamond();
        let r = p.regions(0);
        assert_eq!(r.count(), 1);
        assert_eq!(r.members(0).len(), 4);
    }

    #[test]
    fn chain_component_is_one_region() {
        let p = fixtures::four_chain();
        let r = p.regions(0);
        assert_eq!(r.count(), 1);
        assert_eq!(r.members(0), &[0, 1, 2, 3]);
    }

    #[test]
    fn strict_pair_region_lookup() {
        let p = fixtures::two_component();
        let (a, b) = (idx(&p, "a"), idx(&p, "b"));
        let (c, e) = (idx(&p, "c"), idx(&p, "e"));
        assert_eq!(p.region_of_strict_pair(a, b), Some((0, 0)));
        assert_eq!(p.region_of_strict_pair(c, e), Some((0, 1)));
        assert_eq!(p.region_of_strict_pair(a, a), None);
        let (g, i) = (idx(&p, "g"), idx(&p, "i"));
        assert_eq!(p.region_of_strict_pair(g, i), Some((1, 0)));
    }

    #[test]
    fn region_invariants_on_fixtures() {
        for p in fixtures::all() {
            for c in 0..p.components().count() {
                let reg = p.regions(c);
                // union of regions covers the component
                let mut union: Vec<usize> = (0..reg.count())
                    .flat_map(|j| reg.members(j).iter().copied())
                    .collect();
                union.sort_unstable();
                union.dedup();
                assert_eq!(union, p.components().members(c));
                // overlap of distinct regions: only extremes, no strict pairs
                for i in 0..reg.count() {
                    for j in (i + 1)..reg.count() {
                        let shared: Vec<usize> = reg
                            .members(i)
                            .iter()
                            .copied()
                            .filter(|&x| reg.contains(j, x))
                            .collect();
                        for &x in &shared {
                            assert!(p.is_minimal(x) || p.is_maximal(x));
                            for &y in &shared {
                                assert!(!p.lt(x, y));
                            }
                        }
                    }
                }
                // every maximal chain lies inside exactly one region
                for (ci, chain) in p.maximal_chains(c).iter().enumerate() {
                    let holders: Vec<usize> = (0..reg.count())
                        .filter(|&j| chain.iter().all(|&x| reg.contains(j, x)))
                        .collect();
                    assert_eq!(holders.len(), 1, "chain {ci} in component {c}");
                    assert!(reg.chain_class(holders[0]).contains(&ci));
                }
            }
            // cross-component incomparability
            for x in 0..p.len() {
                for y in 0..p.len() {
                    if p.components().component_of(x) != p.components().component_of(y) {
                        assert!(!p.comparable(x, y));
                    }
                }
            }
        }
    }
}
