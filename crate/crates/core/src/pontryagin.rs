//! Characters of finite abelian groups, alternating forms on duals, and
//! two-cocycles on duals.

use std::collections::HashMap;

use num_integer::{gcd, Integer};
use serde_json::{json, Value};

use crate::cyclo::{sqrt_odd_root, CycNum, Root};
use crate::error::{Error, Result};
use crate::groups::{odometer, FiniteGroup, Subgroup};

/// Largest dual on which cocycle searches run.
pub const COCYCLE_SEARCH_LIMIT: usize = 16;

/// A character given by its exponents on the dual generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub exps: Vec<usize>,
}

/// The dual group `Â` of an abelian subgroup `A ⊆ G`, with respect to a basis
/// `g₁, …, g_r` of `A`. The character with exponents `(a₁, …, a_r)` sends `gᵢ`
/// to `ζ_{dᵢ}^{aᵢ}`.
#[derive(Clone, Debug)]
pub struct Dual {
    subgroup: Subgroup,
    gens: Vec<usize>,
    orders: Vec<usize>,
    exponent: usize,
    coords: HashMap<usize, Vec<usize>>,
    // values[χ][position of a in subgroup] as an exponent of ζ_exponent
    values: Vec<Vec<usize>>,
}

impl Dual {
    /// Dual with respect to the invariant-factor basis of `A`.
    pub fn new(g: &FiniteGroup, a: &Subgroup) -> Result<Dual> {
        let st = g.abelian_structure(a)?;
        Dual::with_basis(g, a, st.generators())
    }

    /// Dual with respect to a caller-supplied basis of `A`.
    pub fn with_basis(g: &FiniteGroup, a: &Subgroup, gens: &[usize]) -> Result<Dual> {
        if !g.is_abelian_subgroup(a) {
            return Err(Error::NotAbelian);
        }
        if let Some(&x) = gens.iter().find(|&&x| !a.contains(x)) {
            return Err(Error::NotInSubgroup(x));
        }
        let orders: Vec<usize> = gens.iter().map(|&x| g.element_order(x)).collect();
        let mut coords = HashMap::new();
        let mut exps = vec![0usize; gens.len()];
        loop {
            let x = exps
                .iter()
                .zip(gens)
                .fold(0, |acc, (&e, &h)| g.mul(acc, g.pow(h, e as i64)));
            if coords.insert(x, exps.clone()).is_some() {
                return Err(Error::parse("generators are not independent"));
            }
            if !odometer(&mut exps, &orders) {
                break;
            }
        }
        if coords.len() != a.order() {
            return Err(Error::parse("generators do not span the subgroup"));
        }
        let exponent = orders.iter().fold(1, |acc, &d| acc.lcm(&d));
        let mut dual = Dual {
            subgroup: a.clone(),
            gens: gens.to_vec(),
            orders,
            exponent,
            coords,
            values: Vec::new(),
        };
        dual.values = (0..dual.size())
            .map(|ci| {
                let chi = dual.character(ci);
                a.elements()
                    .iter()
                    .map(|&x| dual.pairing(&chi.exps, &dual.coords[&x]))
                    .collect()
            })
            .collect();
        Ok(dual)
    }

    fn pairing(&self, chi: &[usize], x: &[usize]) -> usize {
        let e = self.exponent;
        chi.iter()
            .zip(x)
            .zip(&self.orders)
            .map(|((&a, &b), &d)| a * b * (e / d))
            .sum::<usize>()
            % e
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// `|Â| = |A|`.
    pub fn size(&self) -> usize {
        self.subgroup.order()
    }

    /// Exponent vector of an element of `A`.
    pub fn coords(&self, x: usize) -> Result<&[usize]> {
        self.coords
            .get(&x)
            .map(Vec::as_slice)
            .ok_or(Error::NotInSubgroup(x))
    }

    /// The `i`-th character in lexicographic exponent order.
    pub fn character(&self, mut i: usize) -> Character {
        let mut exps = vec![0; self.orders.len()];
        for k in (0..exps.len()).rev() {
            exps[k] = i % self.orders[k];
            i /= self.orders[k];
        }
        Character { exps }
    }

    pub fn index_of(&self, chi: &Character) -> usize {
        chi.exps
            .iter()
            .zip(&self.orders)
            .fold(0, |acc, (&a, &d)| acc * d + a % d)
    }

    /// All characters, in lexicographic exponent order.
    pub fn characters(&self) -> Vec<Character> {
        (0..self.size()).map(|i| self.character(i)).collect()
    }

    /// The dual generator `χ⁽ⁱ⁾`.
    pub fn dual_generator(&self, i: usize) -> Character {
        let mut exps = vec![0; self.orders.len()];
        exps[i] = 1;
        Character { exps }
    }

    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.character(a), self.character(b));
        let exps = (0..x.exps.len())
            .map(|k| (x.exps[k] + y.exps[k]) % self.orders[k])
            .collect();
        self.index_of(&Character { exps })
    }

    pub fn inv_idx(&self, a: usize) -> usize {
        let x = self.character(a);
        let exps = (0..x.exps.len())
            .map(|k| (self.orders[k] - x.exps[k]) % self.orders[k])
            .collect();
        self.index_of(&Character { exps })
    }

    pub fn pow_idx(&self, a: usize, k: i64) -> usize {
        let x = self.character(a);
        let exps = (0..x.exps.len())
            .map(|i| (x.exps[i] as i64 * k).rem_euclid(self.orders[i] as i64) as usize)
            .collect();
        self.index_of(&Character { exps })
    }

    /// `χ(a)` as a root of unity.
    pub fn eval(&self, chi: &Character, a: usize) -> Result<Root> {
        let x = self.coords(a)?;
        Ok(Root::new(self.pairing(&chi.exps, x) as i64, self.exponent as u32))
    }

    /// `χ(a)` as a field element.
    pub fn eval_character(&self, chi: &Character, a: usize) -> Result<CycNum> {
        Ok(self.eval(chi, a)?.to_cyc())
    }

    /// `χ_i(x)` for the element at position `pos` of the sorted subgroup, as an
    /// exponent of `ζ_exponent`.
    pub fn value_exp(&self, ci: usize, pos: usize) -> usize {
        self.values[ci][pos]
    }

    /// Restriction of `χ ∈ Â` to a smaller dual `B̂` with `B ⊆ A`.
    pub fn restrict(&self, target: &Dual, chi: &Character) -> Result<Character> {
        let mut exps = Vec::with_capacity(target.rank());
        for (k, &h) in target.gens.iter().enumerate() {
            let r = self.eval(chi, h)?;
            let e = r
                .exponent_mod(target.orders[k] as u32)
                .ok_or(Error::NotInSubgroup(h))?;
            exps.push(e as usize);
        }
        Ok(Character { exps })
    }
}

/// An alternating bilinear form on a dual `Â`, stored on dual generators:
/// `b(χ⁽ⁱ⁾, χ⁽ʲ⁾) = ζ_{mᵢⱼ}^{eᵢⱼ}` with `mᵢⱼ = gcd(dᵢ, dⱼ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AltForm {
    orders: Vec<usize>,
    matrix: Vec<Vec<usize>>,
}

impl AltForm {
    pub fn trivial(orders: &[usize]) -> AltForm {
        let r = orders.len();
        AltForm {
            orders: orders.to_vec(),
            matrix: vec![vec![0; r]; r],
        }
    }

    /// Build from the upper-triangular entries, filling in the skew part.
    pub fn from_upper(orders: &[usize], upper: impl Fn(usize, usize) -> i64) -> AltForm {
        let r = orders.len();
        let mut matrix = vec![vec![0; r]; r];
        for i in 0..r {
            for j in i + 1..r {
                let m = gcd(orders[i], orders[j]) as i64;
                let e = upper(i, j).rem_euclid(m);
                matrix[i][j] = e as usize;
                matrix[j][i] = ((m - e) % m) as usize;
            }
        }
        AltForm {
            orders: orders.to_vec(),
            matrix,
        }
    }

    /// Read a form off a function on pairs of characters, checking that the
    /// function really is alternating and bilinear on all of `Â × Â`.
    pub fn from_values(dual: &Dual, f: impl Fn(usize, usize) -> Result<Root>) -> Result<AltForm> {
        let r = dual.rank();
        let gen_idx: Vec<usize> = (0..r).map(|i| dual.index_of(&dual.dual_generator(i))).collect();
        let mut upper = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in i + 1..r {
                let m = gcd(dual.orders[i], dual.orders[j]) as u32;
                let v = f(gen_idx[i], gen_idx[j])?;
                upper[i][j] = v.exponent_mod(m).ok_or(Error::NotACocycle)? as i64;
            }
        }
        let form = AltForm::from_upper(dual.orders(), |i, j| upper[i][j]);
        for a in 0..dual.size() {
            for b in 0..dual.size() {
                if f(a, b)? != form.eval_idx(dual, a, b) {
                    return Err(Error::NotACocycle);
                }
            }
        }
        Ok(form)
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn matrix(&self) -> &[Vec<usize>] {
        &self.matrix
    }

    pub fn is_trivial(&self) -> bool {
        self.matrix.iter().all(|row| row.iter().all(|&e| e == 0))
    }

    /// `b(ρ, σ)` for characters given by exponent vectors.
    pub fn eval(&self, rho: &[usize], sigma: &[usize]) -> Root {
        let e = self.orders.iter().fold(1, |acc, &d| acc.lcm(&d));
        let mut s = 0usize;
        for i in 0..self.orders.len() {
            for j in 0..self.orders.len() {
                let m = gcd(self.orders[i], self.orders[j]);
                s += self.matrix[i][j] * rho[i] * sigma[j] * (e / m);
            }
        }
        Root::new((s % e) as i64, e as u32)
    }

    pub fn eval_idx(&self, dual: &Dual, a: usize, b: usize) -> Root {
        self.eval(&dual.character(a).exps, &dual.character(b).exps)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &AltForm) -> AltForm {
        let m = &other.matrix;
        AltForm::from_upper(&self.orders, |i, j| (self.matrix[i][j] + m[i][j]) as i64)
    }

    pub fn inv(&self) -> AltForm {
        AltForm::from_upper(&self.orders, |i, j| -(self.matrix[i][j] as i64))
    }

    pub fn pow(&self, k: i64) -> AltForm {
        AltForm::from_upper(&self.orders, |i, j| self.matrix[i][j] as i64 * k)
    }

    /// True iff `ρ ↦ b(ρ, −)` is injective.
    pub fn is_nondegenerate(&self, dual: &Dual) -> bool {
        let gens: Vec<Character> = (0..dual.rank()).map(|i| dual.dual_generator(i)).collect();
        (1..dual.size()).all(|a| {
            let rho = dual.character(a);
            gens.iter().any(|g| !self.eval(&rho.exps, &g.exps).is_one())
        })
    }

    /// Invariance under the given action, checked on generators of `G`.
    pub fn is_invariant(&self, dual: &Dual, action: &DualAction, gens: &[usize]) -> bool {
        let r = dual.rank();
        let idx: Vec<usize> = (0..r).map(|i| dual.index_of(&dual.dual_generator(i))).collect();
        gens.iter().all(|&g| {
            (0..r).all(|i| {
                (i + 1..r).all(|j| {
                    let (a, b) = (action.apply(g, idx[i]), action.apply(g, idx[j]));
                    self.eval_idx(dual, a, b) == self.eval_idx(dual, idx[i], idx[j])
                })
            })
        })
    }

    /// `b(σ, τ) = b'(p(σ), p(τ))` for the restriction `p : Â → B̂`.
    pub fn pullback(dual_a: &Dual, dual_b: &Dual, form_b: &AltForm) -> Result<AltForm> {
        let restricted: Vec<Character> = (0..dual_a.size())
            .map(|i| dual_a.restrict(dual_b, &dual_a.character(i)))
            .collect::<Result<_>>()?;
        AltForm::from_values(dual_a, |a, b| {
            Ok(form_b.eval(&restricted[a].exps, &restricted[b].exps))
        })
    }

    /// `{"subgroup": [...], "generators": [...], "matrix": [[...]]}`.
    pub fn to_json(&self, dual: &Dual) -> Value {
        json!({
            "subgroup": dual.subgroup().elements(),
            "generators": dual.generators(),
            "matrix": self.matrix,
        })
    }

    /// Parse a form together with the dual it lives on.
    pub fn from_json(g: &FiniteGroup, v: &Value) -> Result<(Dual, AltForm)> {
        let list = |key: &str| -> Result<Vec<usize>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(format!("AltForm needs \"{key}\"")))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|x| x as usize)
                        .filter(|&x| x < g.order())
                        .ok_or_else(|| Error::parse("element index out of range"))
                })
                .collect()
        };
        let elements = list("subgroup")?;
        let gens = list("generators")?;
        let sub = g.generate(&elements);
        if sub.order() != Subgroup::from_unsorted(elements).order() {
            return Err(Error::parse("subgroup list is not closed"));
        }
        let dual = Dual::with_basis(g, &sub, &gens)?;
        let rows = v
            .get("matrix")
            .and_then(Value::as_array)
            .filter(|r| r.len() == gens.len())
            .ok_or_else(|| Error::parse("matrix must be r×r"))?;
        let mut m = vec![vec![0i64; gens.len()]; gens.len()];
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == gens.len())
                .ok_or_else(|| Error::parse("matrix must be r×r"))?;
            for (j, x) in row.iter().enumerate() {
                m[i][j] = x.as_i64().ok_or_else(|| Error::parse("matrix entries are integers"))?;
            }
        }
        let orders = dual.orders().to_vec();
        for i in 0..gens.len() {
            let mi = orders[i] as i64;
            if m[i][i].rem_euclid(mi) != 0 {
                return Err(Error::parse("form is not alternating"));
            }
            for j in 0..gens.len() {
                let mij = gcd(orders[i], orders[j]) as i64;
                if (m[i][j] + m[j][i]).rem_euclid(mij) != 0 {
                    return Err(Error::parse("matrix is not skew"));
                }
            }
        }
        let form = AltForm::from_upper(&orders, |i, j| m[i][j]);
        Ok((dual, form))
    }
}

/// Every alternating bilinear form on `Â`.
pub fn alternating_forms(dual: &Dual, limit: usize) -> Result<Vec<AltForm>> {
    if dual.size() > limit {
        return Err(Error::OrderLimitExceeded {
            size: dual.size(),
            limit,
        });
    }
    let r = dual.rank();
    let slots: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    let radix: Vec<usize> = slots
        .iter()
        .map(|&(i, j)| gcd(dual.orders[i], dual.orders[j]))
        .collect();
    let mut digits = vec![0usize; slots.len()];
    let mut out = Vec::new();
    loop {
        let lookup: HashMap<(usize, usize), usize> =
            slots.iter().copied().zip(digits.iter().copied()).collect();
        out.push(AltForm::from_upper(dual.orders(), |i, j| lookup[&(i, j)] as i64));
        if !odometer(&mut digits, &radix) {
            break;
        }
    }
    Ok(out)
}

/// True iff every invariant factor occurs an even number of times.
pub fn is_symmetric_type(orders: &[usize]) -> bool {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &d in orders.iter().filter(|&&d| d > 1) {
        *counts.entry(d).or_default() += 1;
    }
    counts.values().all(|c| c % 2 == 0)
}

/// Action of `G` on `Â` by `(g·χ)(a) = χ(g⁻¹ a g)`, as permutations of
/// character indices.
#[derive(Clone, Debug)]
pub struct DualAction {
    perms: Vec<Vec<usize>>,
}

impl DualAction {
    pub fn new(g: &FiniteGroup, dual: &Dual) -> Result<DualAction> {
        if !g.is_normal(dual.subgroup()) {
            return Err(Error::NotSupported);
        }
        let perms = (0..g.order())
            .map(|h| {
                let hi = g.inv(h);
                (0..dual.size())
                    .map(|ci| {
                        let chi = dual.character(ci);
                        let exps = dual
                            .gens
                            .iter()
                            .zip(&dual.orders)
                            .map(|(&x, &d)| {
                                let r = dual.eval(&chi, g.conj(hi, x)).expect("normal");
                                r.exponent_mod(d as u32).expect("value order divides d") as usize
                            })
                            .collect();
                        dual.index_of(&Character { exps })
                    })
                    .collect()
            })
            .collect();
        Ok(DualAction { perms })
    }

    /// A bare permutation action, given by images of character indices under
    /// each acting element.
    pub fn from_perms(perms: Vec<Vec<usize>>) -> DualAction {
        DualAction { perms }
    }

    pub fn apply(&self, g: usize, chi: usize) -> usize {
        self.perms[g][chi]
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }
}

/// `G`-invariant alternating forms on `Â`, optionally only the non-degenerate ones.
pub fn invariant_forms(
    g: &FiniteGroup,
    dual: &Dual,
    action: &DualAction,
    only_nondegenerate: bool,
    limit: usize,
) -> Result<Vec<AltForm>> {
    Ok(alternating_forms(dual, limit)?
        .into_iter()
        .filter(|b| b.is_invariant(dual, action, g.generators()))
        .filter(|b| !only_nondegenerate || b.is_nondegenerate(dual))
        .collect())
}

/// A two-cocycle on `Â` stored as a dense table indexed by character indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub values: Vec<Vec<CycNum>>,
}

impl Cocycle {
    pub fn constant_one(n: usize) -> Cocycle {
        Cocycle {
            values: vec![vec![CycNum::one(); n]; n],
        }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, a: usize, b: usize) -> &CycNum {
        &self.values[a][b]
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.size()).all(|a| self.values[0][a].is_one() && self.values[a][0].is_one())
    }

    /// `c(ρ,σ) c(ρσ,τ) = c(σ,τ) c(ρ,στ)` on all triples.
    pub fn is_cocycle(&self, dual: &Dual) -> bool {
        let n = self.size();
        if n != dual.size() {
            return false;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = dual.mul_idx(a, b);
                let lhs0 = &self.values[a][b];
                for c in 0..n {
                    let bc = dual.mul_idx(b, c);
                    let lhs = lhs0 * &self.values[ab][c];
                    let rhs = &self.values[b][c] * &self.values[a][bc];
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The associated form `b(ρ, σ) = c(σ, ρ) / c(ρ, σ)`.
    pub fn form(&self, dual: &Dual) -> Result<AltForm> {
        if self.size() != dual.size() {
            return Err(Error::NotACocycle);
        }
        AltForm::from_values(dual, |a, b| {
            let q = &self.values[b][a] * &self.values[a][b].inv()?;
            q.as_root().ok_or(Error::NotACocycle)
        })
    }

    pub fn is_invariant(&self, action: &DualAction, gens: &[usize]) -> bool {
        let n = self.size();
        gens.iter().all(|&g| {
            (0..n).all(|a| {
                (0..n).all(|b| self.values[action.apply(g, a)][action.apply(g, b)] == self.values[a][b])
            })
        })
    }
}

/// The square-root cocycle of a form on a dual of odd order:
/// `c(ρ, σ) = b(σ, ρ)^{1/2}`, whose associated form is `b`.
pub fn cocycle_from_form_odd(dual: &Dual, b: &AltForm) -> Result<Cocycle> {
    let n = dual.size();
    if n % 2 == 0 {
        return Err(Error::EvenOrder);
    }
    let m = dual.exponent() as u32;
    let values = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| sqrt_odd_root(&b.eval_idx(dual, y, x).to_cyc(), m))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Cocycle { values })
}

/// How [`invariant_cocycle_search`] reached its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchArgument {
    /// A cocycle was found and verified.
    Witness,
    /// The pairwise relations forced by invariance and the form contradict
    /// each other; no invariant cocycle exists with values in any field.
    RangeIndependentObstruction,
    /// No solution with values in the searched roots of unity.
    RangeExhausted,
}

/// Result of [`invariant_cocycle_search`].
#[derive(Clone, Debug)]
pub struct CocycleSearch {
    pub cocycle: Option<Cocycle>,
    pub argument: SearchArgument,
    /// Order of the root-of-unity group the values were drawn from.
    pub range: usize,
}

/// Search for a normalized cocycle on `Â` with form `b` that is invariant under
/// the given action. Values range over `μ_{exp(A)}` and then `μ_{2·exp(A)}`.
pub fn invariant_cocycle_search(
    dual: &Dual,
    b: &AltForm,
    action: &DualAction,
    acting: &[usize],
) -> Result<CocycleSearch> {
    let n = dual.size();
    if n > COCYCLE_SEARCH_LIMIT {
        return Err(Error::OrderLimitExceeded {
            size: n,
            limit: COCYCLE_SEARCH_LIMIT,
        });
    }
    let e = dual.exponent();
    let mut last = 2 * e;
    for m in [e, 2 * e] {
        last = m;
        match solve_invariant_cocycle(dual, b, action, acting, m) {
            Solve::Found(c) => {
                debug_assert!(c.is_cocycle(dual) && c.is_normalized());
                return Ok(CocycleSearch {
                    cocycle: Some(c),
                    argument: SearchArgument::Witness,
                    range: m,
                });
            }
            Solve::Obstruction => {
                return Ok(CocycleSearch {
                    cocycle: None,
                    argument: SearchArgument::RangeIndependentObstruction,
                    range: m,
                })
            }
            Solve::NoSolution => {}
        }
    }
    Ok(CocycleSearch {
        cocycle: None,
        argument: SearchArgument::RangeExhausted,
        range: last,
    })
}

enum Solve {
    Found(Cocycle),
    Obstruction,
    NoSolution,
}

/// Union-find over unknowns `x_v ∈ Z/m` with relations `x_a = x_b + w`.
struct OffsetUnionFind {
    parent: Vec<usize>,
    offset: Vec<usize>, // x_v = x_parent + offset
    m: usize,
}

impl OffsetUnionFind {
    fn new(n: usize, m: usize) -> Self {
        OffsetUnionFind {
            parent: (0..n).collect(),
            offset: vec![0; n],
            m,
        }
    }

    fn find(&mut self, v: usize) -> (usize, usize) {
        if self.parent[v] == v {
            return (v, 0);
        }
        let p = self.parent[v];
        let (r, o) = self.find(p);
        self.parent[v] = r;
        self.offset[v] = (self.offset[v] + o) % self.m;
        (r, self.offset[v])
    }

    /// Impose `x_a = x_b + w`; false on contradiction.
    fn relate(&mut self, a: usize, b: usize, w: usize) -> bool {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        let m = self.m;
        if ra == rb {
            return oa % m == (ob + w) % m;
        }
        // x_ra = x_a - oa = x_rb + ob + w - oa
        self.parent[ra] = rb;
        self.offset[ra] = (ob + w + m - oa % m) % m;
        true
    }
}

fn solve_invariant_cocycle(
    dual: &Dual,
    b: &AltForm,
    action: &DualAction,
    acting: &[usize],
    m: usize,
) -> Solve {
    let n = dual.size();
    let var = |x: usize, y: usize| x * n + y;
    let zero = n * n; // a pinned variable equal to 0
    let mut uf = OffsetUnionFind::new(n * n + 1, m);
    let bexp = |x: usize, y: usize| -> usize {
        b.eval_idx(dual, x, y)
            .exponent_mod(m as u32)
            .expect("form values lie in μ_exp") as usize
    };
    let mut ok = true;
    for x in 0..n {
        ok &= uf.relate(var(0, x), zero, 0);
        ok &= uf.relate(var(x, 0), zero, 0);
        for y in 0..n {
            // c(y, x) = c(x, y) · b(x, y)
            ok &= uf.relate(var(y, x), var(x, y), bexp(x, y));
            for &g in acting {
                ok &= uf.relate(var(action.apply(g, x), action.apply(g, y)), var(x, y), 0);
            }
        }
    }
    if !ok {
        return Solve::Obstruction;
    }
    // remaining class variables, with the zero class pinned
    let mut roots: Vec<usize> = Vec::new();
    let mut root_pos: HashMap<usize, usize> = HashMap::new();
    let (zr, zo) = uf.find(zero);
    for v in 0..n * n {
        let (r, _) = uf.find(v);
        if r != zr && !root_pos.contains_key(&r) {
            root_pos.insert(r, roots.len());
            roots.push(r);
        }
    }
    let k = roots.len();
    // cocycle equations: x(a,b) + x(ab,c) - x(b,c) - x(a,bc) = 0
    let mut rows: Vec<(Vec<i64>, i64)> = Vec::new();
    for a in 1..n {
        for bb in 1..n {
            let ab = dual.mul_idx(a, bb);
            for c in 1..n {
                let bc = dual.mul_idx(bb, c);
                let mut row = vec![0i64; k];
                let mut rhs = 0i64;
                for (v, s) in [
                    (var(a, bb), 1i64),
                    (var(ab, c), 1),
                    (var(bb, c), -1),
                    (var(a, bc), -1),
                ] {
                    let (r, o) = uf.find(v);
                    if r == zr {
                        // x_v = x_zero + (o - zo) = o - zo
                        rhs -= s * (o as i64 - zo as i64);
                    } else {
                        row[root_pos[&r]] += s;
                        rhs -= s * o as i64;
                    }
                }
                rows.push((row, rhs));
            }
        }
    }
    let Some(sol) = solve_mod(rows, k, m) else {
        return Solve::NoSolution;
    };
    let values = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let (r, o) = uf.find(var(x, y));
                    let val = if r == zr {
                        (o + m - zo) % m
                    } else {
                        (sol[root_pos[&r]] + o) % m
                    };
                    Root::new(val as i64, m as u32).to_cyc()
                })
                .collect()
        })
        .collect();
    let c = Cocycle { values };
    if c.is_cocycle(dual) && c.is_invariant(action, acting) {
        Solve::Found(c)
    } else {
        Solve::NoSolution
    }
}

/// Solve a linear system over `Z/m`; free variables are set to zero.
pub(crate) fn solve_mod(rows: Vec<(Vec<i64>, i64)>, k: usize, m: usize) -> Option<Vec<usize>> {
    // split m into prime powers and combine by CRT
    let mut parts = Vec::new();
    let mut rest = m;
    let mut p = 2;
    while rest > 1 {
        if rest % p == 0 {
            let mut q = 1;
            while rest % p == 0 {
                rest /= p;
                q *= p;
            }
            parts.push((p, q));
        }
        p += 1;
    }
    let mut sol = vec![0usize; k];
    let mut modulus = 1usize;
    for (p, q) in parts {
        let s = solve_prime_power(&rows, k, p, q)?;
        for i in 0..k {
            sol[i] = crt(sol[i], modulus, s[i], q);
        }
        modulus *= q;
    }
    Some(sol)
}

fn crt(a: usize, m: usize, b: usize, n: usize) -> usize {
    // m and n coprime
    (0..n).map(|t| a + m * t).find(|x| x % n == b % n).expect("coprime moduli")
}

fn valuation(mut x: i64, p: i64, q: i64) -> u32 {
    x = x.rem_euclid(q);
    if x == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: i64, q: i64) -> i64 {
    let ext = a.rem_euclid(q).extended_gcd(&q);
    ext.x.rem_euclid(q)
}

/// Elimination over the local ring `Z/p^e` with full pivoting on valuation.
fn solve_prime_power(rows: &[(Vec<i64>, i64)], k: usize, p: usize, q: usize) -> Option<Vec<usize>> {
    let (p, q) = (p as i64, q as i64);
    let mut a: Vec<Vec<i64>> = rows
        .iter()
        .map(|(r, _)| r.iter().map(|x| x.rem_euclid(q)).collect())
        .collect();
    let mut rhs: Vec<i64> = rows.iter().map(|(_, c)| c.rem_euclid(q)).collect();
    let mut col_perm: Vec<usize> = (0..k).collect();
    let mut pivots: Vec<(usize, u32)> = Vec::new(); // (row, valuation)
    let nrows = a.len();
    let mut r = 0;
    while r < nrows && r < k {
        // smallest valuation in the remaining block
        let mut best: Option<(usize, usize, u32)> = None;
        for i in r..nrows {
            for j in r..k {
                let v = valuation(a[i][col_perm[j]], p, q);
                if v != u32::MAX && best.map_or(true, |b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        a.swap(r, bi);
        rhs.swap(r, bi);
        col_perm.swap(r, bj);
        let c = col_perm[r];
        let pv = p.pow(v);
        let unit = inv_mod(a[r][c] / pv, q);
        for i in r + 1..nrows {
            if a[i][c] == 0 {
                continue;
            }
            // a[i][c] is divisible by p^v
            let f = (a[i][c] / pv % q * unit) % q;
            for j in 0..k {
                let cj = col_perm[j];
                a[i][cj] = (a[i][cj] - f * a[r][cj]).rem_euclid(q);
            }
            rhs[i] = (rhs[i] - f * rhs[r]).rem_euclid(q);
        }
        pivots.push((r, v));
        r += 1;
    }
    // consistency of the zero rows
    if rhs[r..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut x = vec![0i64; k];
    for &(row, v) in pivots.iter().rev() {
        let c = col_perm[row];
        let mut s = rhs[row];
        for j in row + 1..k {
            let cj = col_perm[j];
            s = (s - a[row][cj] * x[cj]).rem_euclid(q);
        }
        let pv = p.pow(v);
        if s % pv != 0 {
            return None;
        }
        let unit = inv_mod(a[row][c] / pv, q);
        let qq = q / pv;
        x[c] = ((s / pv) * unit).rem_euclid(qq);
    }
    Some(x.into_iter().map(|v| v as usize).collect())
}
