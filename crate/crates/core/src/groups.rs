//! Finite groups given by multiplication tables: construction, conjugacy
//! classes, abelian normal subgroups and (class-preserving) automorphisms.

use std::collections::{HashMap, VecDeque};

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Default bound on group orders for exponential searches.
pub const DEFAULT_MAX_ORDER: usize = 64;

/// Default bound for closing permutation generators.
pub const DEFAULT_PERM_BOUND: usize = 256;

/// Largest permutation degree accepted from JSON input.
pub const PERM_DEGREE_LIMIT: usize = 256;

/// Largest group for which a multiplication table is ever materialized.
pub const TABLE_LIMIT: usize = 4096;

/// A finite group with identity at index 0.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    n: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    orders: Vec<usize>,
    labels: Option<Vec<String>>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    generators: Vec<usize>,
}

/// A subgroup, as a sorted list of element indices of the parent group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

/// A map between groups given by the images of all elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupMap {
    pub images: Vec<usize>,
}

fn not_a_group(reason: &str, a: usize, b: usize, c: usize) -> Error {
    Error::NotAGroup {
        reason: reason.to_string(),
        a,
        b,
        c,
    }
}

/// Light's test on a Latin square with identity `e`.
///
/// Generators are added one at a time, each checked against every pair, until
/// the right-multiplication closure of `e` is everything. Elements passing the
/// check form a subgroup, so the closure at least doubles per generator.
fn check_associative(table: &[Vec<usize>], e: usize) -> Result<()> {
    let n = table.len();
    let mut reached = vec![false; n];
    reached[e] = true;
    let mut frontier = vec![e];
    let mut gens: Vec<usize> = Vec::new();
    loop {
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                let y = table[x][s];
                if !reached[y] {
                    reached[y] = true;
                    frontier.push(y);
                }
            }
        }
        let Some(s) = reached.iter().position(|&r| !r) else {
            return Ok(());
        };
        for a in 0..n {
            let as_ = table[a][s];
            for b in 0..n {
                if table[as_][b] != table[a][table[s][b]] {
                    return Err(not_a_group("associativity fails", a, s, b));
                }
            }
        }
        gens.push(s);
        frontier = (0..n).filter(|&x| reached[x]).collect();
    }
}

impl FiniteGroup {
    /// Validate a multiplication table and build the group.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(not_a_group("empty table", 0, 0, 0));
        }
        if n > TABLE_LIMIT {
            return Err(Error::OrderLimitExceeded {
                size: n,
                limit: TABLE_LIMIT,
            });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(not_a_group("table is not square", i, row.len(), n));
            }
            if let Some(j) = row.iter().position(|&x| x >= n) {
                return Err(not_a_group("entry out of range", i, j, row[j]));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| not_a_group("no two-sided identity", 0, 0, 0))?;
        for (a, row) in table.iter().enumerate() {
            let mut seen = vec![false; n];
            for (b, &x) in row.iter().enumerate() {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(not_a_group("row repeats an entry", a, b, x));
                }
            }
        }
        for b in 0..n {
            let mut seen = vec![false; n];
            for a in 0..n {
                if std::mem::replace(&mut seen[table[a][b]], true) {
                    return Err(not_a_group("column repeats an entry", a, b, table[a][b]));
                }
            }
        }
        check_associative(&table, e)?;
        // swap indices 0 and e so the identity sits at 0
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut flat = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[relabel(a) * n + relabel(b)] = relabel(table[a][b]);
            }
        }
        Ok(FiniteGroup::from_flat("table".into(), n, flat, None))
    }

    /// Close a set of permutations of `{1..degree}` (1-based images) under composition.
    ///
    /// Products compose right to left: `(gh)(i) = g(h(i))`.
    pub fn from_permutations(
        degree: usize,
        generators: &[Vec<usize>],
        bound: usize,
    ) -> Result<FiniteGroup> {
        let mut gens: Vec<Vec<usize>> = Vec::new();
        for g in generators {
            if g.len() != degree {
                return Err(Error::parse(format!(
                    "permutation of length {} on {degree} points",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x == 0 || x > degree || seen[x - 1] {
                    return Err(Error::parse("generator is not a bijection"));
                }
                seen[x - 1] = true;
            }
            gens.push(g.iter().map(|x| x - 1).collect());
        }
        let compose = |g: &[usize], h: &[usize]| -> Vec<usize> { h.iter().map(|&x| g[x]).collect() };
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        let limit = bound.min(TABLE_LIMIT);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let p = compose(&elems[i], g);
                if !index.contains_key(&p) {
                    if elems.len() >= limit {
                        return Err(Error::OrderLimitExceeded {
                            size: elems.len() + 1,
                            limit,
                        });
                    }
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        let mut flat = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[a * n + b] = index[&compose(&elems[a], &elems[b])];
            }
        }
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        Ok(FiniteGroup::from_flat("perm".into(), n, flat, Some(labels)))
    }

    /// Build from a trusted flat table (identity at 0).
    pub(crate) fn from_flat(
        name: String,
        n: usize,
        table: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> FiniteGroup {
        let mut inverses = vec![0; n];
        for a in 0..n {
            inverses[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("inverse");
        }
        let mut orders = vec![1; n];
        for (a, o) in orders.iter_mut().enumerate() {
            let mut x = a;
            while x != 0 {
                x = table[x * n + a];
                *o += 1;
            }
        }
        let mut g = FiniteGroup {
            name,
            n,
            table,
            inverses,
            orders,
            labels,
            classes: Vec::new(),
            class_of: vec![usize::MAX; n],
            generators: Vec::new(),
        };
        g.compute_classes();
        g.generators = g.greedy_generators();
        g
    }

    fn compute_classes(&mut self) {
        for x in 0..self.n {
            if self.class_of[x] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..self.n).map(|g| self.conj(g, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            let id = self.classes.len();
            for &y in &cls {
                self.class_of[y] = id;
            }
            self.classes.push(cls);
        }
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = vec![0usize];
        while current.len() < self.n {
            // add the element enlarging the generated subgroup the most
            let mut best: Option<(usize, Vec<usize>)> = None;
            for x in 0..self.n {
                if current.binary_search(&x).is_ok() {
                    continue;
                }
                let mut cand = gens.clone();
                cand.push(x);
                let s = self.generate(&cand).elements;
                if best.as_ref().map_or(true, |(_, b)| s.len() > b.len()) {
                    best = Some((x, s));
                }
            }
            let (x, s) = best.expect("proper subgroup has an outside element");
            gens.push(x);
            current = s;
        }
        gens
    }

    /// `{"name": str, "perm_generators": [[...]]}` with 1-based images, or
    /// `{"name": str, "table": [[...]]}`. The name is optional.
    pub fn from_json(v: &Value) -> Result<FiniteGroup> {
        let name = match v.get("name") {
            None => None,
            Some(n) => Some(n.as_str().ok_or_else(|| Error::parse("group name must be a string"))?),
        };
        let rows = |key: &str| -> Result<Vec<Vec<usize>>> {
            v[key]
                .as_array()
                .ok_or_else(|| Error::parse(format!("{key:?} must be an array")))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::parse(format!("{key:?} rows must be arrays")))?
                        .iter()
                        .map(|x| {
                            x.as_u64()
                                .filter(|&x| x <= TABLE_LIMIT as u64)
                                .map(|x| x as usize)
                                .ok_or_else(|| Error::parse("entries must be small non-negative integers"))
                        })
                        .collect()
                })
                .collect()
        };
        let g = match (v.get("perm_generators"), v.get("table")) {
            (Some(_), None) => {
                let gens = rows("perm_generators")?;
                let degree = match v.get("degree") {
                    Some(d) => d
                        .as_u64()
                        .filter(|&d| d <= TABLE_LIMIT as u64)
                        .ok_or_else(|| Error::parse("degree must be a small integer"))?
                        as usize,
                    None => gens
                        .first()
                        .map(Vec::len)
                        .ok_or_else(|| Error::parse("no generators and no degree"))?,
                };
                if degree > PERM_DEGREE_LIMIT {
                    return Err(Error::parse(format!("degree {degree} above {PERM_DEGREE_LIMIT}")));
                }
                FiniteGroup::from_permutations(degree, &gens, TABLE_LIMIT)?
            }
            (None, Some(_)) => {
                let table = rows("table")?;
                if table.len() > TABLE_LIMIT {
                    return Err(Error::OrderLimitExceeded {
                        size: table.len(),
                        limit: TABLE_LIMIT,
                    });
                }
                FiniteGroup::from_table(table)?
            }
            _ => {
                return Err(Error::parse(
                    "group needs exactly one of \"perm_generators\" and \"table\"",
                ))
            }
        };
        Ok(match name {
            Some(n) => g.with_name(n),
            None => g,
        })
    }

    /// `{"name": str, "order": n, "table": [[...]]}`.
    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "order": self.n, "table": self.table_rows()})
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FiniteGroup {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> FiniteGroup {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverses[g])
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.orders[a] as i64;
        let k = k.rem_euclid(o);
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => format!("g{a}"),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Conjugacy classes, identity class first, each sorted.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    /// A small generating set, found greedily.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.n
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| num_integer::lcm(acc, o))
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut inside = vec![false; self.n];
        inside[0] = true;
        let mut elems = vec![0usize];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        Subgroup::from_unsorted(elems)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.n).collect(),
        }
    }

    pub fn center(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.n)
                .filter(|&z| self.classes[self.class_of[z]].len() == 1)
                .collect(),
        }
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        s.elements
            .iter()
            .all(|&x| self.generators.iter().all(|&g| s.contains(self.conj(g, x))))
    }

    pub fn is_abelian_subgroup(&self, s: &Subgroup) -> bool {
        s.elements
            .iter()
            .all(|&x| s.elements.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Every abelian normal subgroup, sorted by (order, elements); the trivial
    /// subgroup comes first.
    ///
    /// Each is reached from the trivial subgroup by repeatedly adjoining a
    /// conjugacy class and taking the generated subgroup; since every class
    /// inside an abelian normal subgroup keeps the intermediate steps abelian,
    /// non-abelian branches are pruned.
    pub fn normal_abelian_subgroups(&self) -> Vec<Subgroup> {
        let mut found: Vec<Subgroup> = vec![self.trivial_subgroup()];
        let mut seen: std::collections::HashSet<Vec<usize>> =
            std::collections::HashSet::from([vec![0]]);
        let mut i = 0;
        while i < found.len() {
            let cur = found[i].clone();
            for cls in &self.classes {
                if cur.contains(cls[0]) {
                    continue;
                }
                let mut gens = cur.elements.clone();
                gens.extend_from_slice(cls);
                let s = self.generate(&gens);
                if !seen.contains(&s.elements) && self.is_abelian_subgroup(&s) {
                    seen.insert(s.elements.clone());
                    found.push(s);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        found
    }

    /// Try to extend images of the generators to a homomorphism `G → G`.
    fn extend_hom(&self, gen_images: &[usize]) -> Option<GroupMap> {
        let mut images = vec![usize::MAX; self.n];
        images[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (k, &g) in self.generators.iter().enumerate() {
                let y = self.mul(x, g);
                let im = self.mul(images[x], gen_images[k]);
                if images[y] == usize::MAX {
                    images[y] = im;
                    queue.push_back(y);
                } else if images[y] != im {
                    return None;
                }
            }
        }
        Some(GroupMap { images })
    }

    fn search_automorphisms(
        &self,
        candidates: &[Vec<usize>],
        cap: usize,
        accept: impl Fn(&GroupMap) -> bool,
    ) -> (Vec<GroupMap>, bool) {
        let k = self.generators.len();
        let mut out = Vec::new();
        let mut choice = vec![0usize; k];
        let mut visited = 0usize;
        let mut complete = true;
        'search: loop {
            visited += 1;
            if visited > cap {
                complete = false;
                break;
            }
            let imgs: Vec<usize> = (0..k).map(|i| candidates[i][choice[i]]).collect();
            if let Some(m) = self.extend_hom(&imgs) {
                if m.is_bijective() && accept(&m) {
                    out.push(m);
                }
            }
            // odometer over candidate choices
            let mut i = k;
            loop {
                if i == 0 {
                    break 'search;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < candidates[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
        out.sort_by(|a, b| a.images.cmp(&b.images));
        (out, complete)
    }

    /// Automorphisms preserving every conjugacy class, together with the index
    /// `[Aut_c(G) : Inn(G)]`.
    pub fn class_preserving_auts(&self, max_order: usize) -> Result<(Vec<GroupMap>, usize)> {
        if self.n > max_order {
            return Err(Error::OrderLimitExceeded {
                size: self.n,
                limit: max_order,
            });
        }
        let candidates: Vec<Vec<usize>> = self
            .generators
            .iter()
            .map(|&g| self.classes[self.class_of[g]].clone())
            .collect();
        let (auts, _) = self.search_automorphisms(&candidates, usize::MAX, |m| {
            (0..self.n).all(|x| self.class_of[m.images[x]] == self.class_of[x])
        });
        let inn = self.n / self.center().order();
        debug_assert!(auts.len() % inn == 0);
        let index = auts.len() / inn;
        Ok((auts, index))
    }

    /// Automorphisms of `G`, searched over images of the generators with
    /// matching element orders. Stops after `cap` candidate tuples; the flag is
    /// `true` when the enumeration is complete.
    pub fn automorphisms(&self, cap: usize) -> (Vec<GroupMap>, bool) {
        let candidates: Vec<Vec<usize>> = self
            .generators
            .iter()
            .map(|&g| (0..self.n).filter(|&x| self.orders[x] == self.orders[g]).collect())
            .collect();
        self.search_automorphisms(&candidates, cap, |_| true)
    }

    /// The inner automorphism `x ↦ g x g⁻¹`.
    pub fn inner(&self, g: usize) -> GroupMap {
        GroupMap {
            images: (0..self.n).map(|x| self.conj(g, x)).collect(),
        }
    }

    /// Independent generators of an abelian subgroup with invariant factors
    /// `d₁ | d₂ | …`.
    pub fn abelian_structure(&self, a: &Subgroup) -> Result<AbelianStructure> {
        if !self.is_abelian_subgroup(a) {
            return Err(Error::NotAbelian);
        }
        let order = a.order();
        let mut primes = Vec::new();
        let mut m = order;
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                primes.push(p);
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        // decompose each Sylow subgroup, largest cyclic factor first
        let mut prime_parts: Vec<Vec<(usize, usize)>> = Vec::new();
        for &p in &primes {
            let sylow: Vec<usize> = a
                .elements
                .iter()
                .copied()
                .filter(|&x| is_power_of(self.orders[x], p))
                .collect();
            let exps = p_group_type(self, &sylow, p);
            let mut chosen = Vec::new();
            let ok = pick_basis(self, &sylow, &exps, p, &mut chosen);
            assert!(ok, "abelian p-group admits a basis of its type");
            prime_parts.push(chosen.iter().zip(&exps).map(|(&g, &e)| (g, p.pow(e as u32))).collect());
        }
        // merge prime parts into invariant factors, aligned from the largest
        let rank = prime_parts.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<(usize, usize)> = Vec::with_capacity(rank);
        for j in 0..rank {
            let mut g = 0;
            let mut d = 1;
            for part in &prime_parts {
                if let Some(&(h, o)) = part.get(j) {
                    g = self.mul(g, h);
                    d *= o;
                }
            }
            factors.push((g, d));
        }
        factors.reverse();
        Ok(AbelianStructure::new(self, a.clone(), factors))
    }
}

fn is_power_of(mut x: usize, p: usize) -> bool {
    while x % p == 0 {
        x /= p;
    }
    x == 1
}

/// Exponents `e₁ ≥ e₂ ≥ …` of an abelian p-group, read off from the number of
/// elements of order dividing `p^k`.
fn p_group_type(g: &FiniteGroup, sylow: &[usize], p: usize) -> Vec<usize> {
    // |Ω_k| = p^{Σ min(e_i, k)}; the number of e_i ≥ k is log_p(|Ω_k| / |Ω_{k-1}|)
    let mut log_omega = vec![0usize];
    let mut k = 1;
    loop {
        let pk = p.pow(k as u32);
        let cnt = sylow.iter().filter(|&&x| pk % g.orders[x] == 0).count();
        let mut l = 0;
        let mut c = cnt;
        while c > 1 {
            c /= p;
            l += 1;
        }
        log_omega.push(l);
        if cnt == sylow.len() {
            break;
        }
        k += 1;
    }
    let mut exps = Vec::new();
    for k in 1..log_omega.len() {
        let at_least_k = log_omega[k] - log_omega[k - 1];
        exps.push(at_least_k);
    }
    // convert counts of e_i ≥ k into the exponent list
    let r = exps.first().copied().unwrap_or(0);
    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        out.push(exps.iter().filter(|&&c| c > i).count());
    }
    out
}

fn pick_basis(
    g: &FiniteGroup,
    sylow: &[usize],
    exps: &[usize],
    p: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    let i = chosen.len();
    if i == exps.len() {
        return true;
    }
    let want = p.pow(exps[i] as u32);
    let target: usize = exps[..=i].iter().map(|&e| p.pow(e as u32)).product();
    for &x in sylow {
        if g.orders[x] != want {
            continue;
        }
        chosen.push(x);
        if g.generate(chosen).order() == target && pick_basis(g, sylow, exps, p, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            continue;
        }
        let mut cyc = vec![s + 1];
        seen[s] = true;
        let mut x = p[s];
        while x != s {
            seen[x] = true;
            cyc.push(x + 1);
            x = p[x];
        }
        let parts: Vec<String> = cyc.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("({})", parts.join(",")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

impl Subgroup {
    pub fn from_unsorted(mut elements: Vec<usize>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Image under a group map.
    pub fn map(&self, m: &GroupMap) -> Subgroup {
        Subgroup::from_unsorted(self.elements.iter().map(|&x| m.images[x]).collect())
    }
}

impl GroupMap {
    pub fn identity(n: usize) -> GroupMap {
        GroupMap {
            images: (0..n).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        GroupMap {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> GroupMap {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        GroupMap { images }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &y in &self.images {
            if y >= seen.len() || seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    pub fn is_homomorphism(&self, src: &FiniteGroup, dst: &FiniteGroup) -> bool {
        (0..src.order()).all(|a| {
            (0..src.order())
                .all(|b| self.images[src.mul(a, b)] == dst.mul(self.images[a], self.images[b]))
        })
    }
}

/// Decomposition `A ≅ ∏ Z/dᵢ` of an abelian subgroup with coordinates.
#[derive(Clone, Debug)]
pub struct AbelianStructure {
    subgroup: Subgroup,
    gens: Vec<usize>,
    orders: Vec<usize>,
    coords: HashMap<usize, Vec<usize>>,
}

impl AbelianStructure {
    fn new(g: &FiniteGroup, subgroup: Subgroup, factors: Vec<(usize, usize)>) -> AbelianStructure {
        let gens: Vec<usize> = factors.iter().map(|f| f.0).collect();
        let orders: Vec<usize> = factors.iter().map(|f| f.1).collect();
        let mut coords = HashMap::new();
        let mut exps = vec![0usize; gens.len()];
        loop {
            let x = exps
                .iter()
                .zip(&gens)
                .fold(0, |acc, (&e, &h)| g.mul(acc, g.pow(h, e as i64)));
            coords.insert(x, exps.clone());
            if !odometer(&mut exps, &orders) {
                break;
            }
        }
        AbelianStructure {
            subgroup,
            gens,
            orders,
            coords,
        }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// `(generator, order)` pairs with orders `d₁ | d₂ | …`.
    pub fn factors(&self) -> Vec<(usize, usize)> {
        self.gens.iter().copied().zip(self.orders.iter().copied()).collect()
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn exponent(&self) -> usize {
        self.orders.last().copied().unwrap_or(1)
    }

    /// Exponent vector of `x` with respect to the generators.
    pub fn coords(&self, x: usize) -> Result<&[usize]> {
        self.coords
            .get(&x)
            .map(Vec::as_slice)
            .ok_or(Error::NotInSubgroup(x))
    }
}

/// Advance a mixed-radix counter; returns `false` after wrapping to zero.
pub(crate) fn odometer(digits: &mut [usize], radix: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}
