//! `B(G)`, its partial product, multiplicity-freeness, the Lie complex and the
//! rule engine that turns them into a verdict on `H²ₗ(G)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupMap, Subgroup};
use crate::hopf::{self, GTensor};
use crate::pontryagin::{self, AltForm, Dual, DualAction, SearchArgument, COCYCLE_SEARCH_LIMIT};

/// Largest group for which the Lie complex is checked (matrices are `n³ × n²`).
pub const LIE_CHECK_LIMIT: usize = 32;
/// Largest group for which automorphism orbits on `B(G)` are used.
pub const AUT_ORBIT_LIMIT: usize = 64;
/// Candidate generator tuples tried when enumerating `Aut(G)`.
pub const AUT_SEARCH_CAP: usize = 2_000_000;
/// Most automorphism orbits on `B(G)` whose unions are enumerated.
const ORBIT_UNION_LIMIT: usize = 20;

/// A pair `(A, b)`: an abelian normal subgroup and a non-degenerate invariant
/// alternating form on `Â`. Equality is equality of `R(A, b)`.
#[derive(Clone, Debug)]
pub struct BGElement {
    pub subgroup: Subgroup,
    pub dual: Dual,
    pub form: AltForm,
    pub canonical_r: GTensor,
}

impl PartialEq for BGElement {
    fn eq(&self, other: &BGElement) -> bool {
        self.canonical_r == other.canonical_r
    }
}

impl BGElement {
    pub fn trivial(g: &Arc<FiniteGroup>) -> BGElement {
        let a = g.trivial_subgroup();
        let dual = Dual::new(g, &a).expect("trivial subgroup is abelian");
        let form = AltForm::trivial(dual.orders());
        BGElement {
            subgroup: a,
            dual,
            form,
            canonical_r: GTensor::one(g, 2),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.subgroup.is_trivial()
    }

    fn from_theta(r: GTensor) -> Result<BGElement> {
        let tv = hopf::theta_of_r(&r)?;
        Ok(BGElement {
            subgroup: tv.socle,
            dual: tv.dual,
            form: tv.form,
            canonical_r: r,
        })
    }

    /// `{"subgroup": [...], "generators": [...], "matrix": [[...]]}`.
    pub fn to_json(&self) -> Value {
        self.form.to_json(&self.dual)
    }
}

/// Every element of `B(G)`: the trivial pair first, then pairs ordered by
/// subgroup and form matrix.
pub fn bg_enumerate(g: &Arc<FiniteGroup>, max_order: usize) -> Result<Vec<BGElement>> {
    check_order(g, max_order)?;
    let mut out = vec![BGElement::trivial(g)];
    let mut nontrivial = Vec::new();
    for a in g.normal_abelian_subgroups() {
        if a.is_trivial() {
            continue;
        }
        let dual = Dual::new(g, &a)?;
        if !pontryagin::is_symmetric_type(dual.orders()) {
            continue;
        }
        let action = DualAction::new(g, &dual)?;
        for b in pontryagin::invariant_forms(g, &dual, &action, true, max_order)? {
            let r = hopf::r_from_form(g, &dual, &b);
            nontrivial.push(BGElement {
                subgroup: a.clone(),
                dual: dual.clone(),
                form: b,
                canonical_r: r,
            });
        }
    }
    nontrivial.sort_by(|x, y| {
        (x.subgroup.order(), &x.subgroup, x.form.matrix())
            .cmp(&(y.subgroup.order(), &y.subgroup, y.form.matrix()))
    });
    for x in nontrivial {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// `[A, b]·[B, b′] = [C, bb′]` for the first abelian normal `C ⊇ A ∪ B`,
/// re-minimized through the socle of `R(C, bb′)`. `None` when no such `C`
/// exists.
pub fn bg_product(g: &Arc<FiniteGroup>, x: &BGElement, y: &BGElement) -> Result<Option<BGElement>> {
    product_among(g, &g.normal_abelian_subgroups(), x, y)
}

fn product_among(
    g: &Arc<FiniteGroup>,
    subgroups: &[Subgroup],
    x: &BGElement,
    y: &BGElement,
) -> Result<Option<BGElement>> {
    match subgroups
        .iter()
        .find(|c| x.subgroup.is_subset_of(c) && y.subgroup.is_subset_of(c))
    {
        Some(c) => bg_product_via(g, x, y, c).map(Some),
        None => Ok(None),
    }
}

/// The product computed inside a given abelian normal `C` containing both socles.
pub fn bg_product_via(
    g: &Arc<FiniteGroup>,
    x: &BGElement,
    y: &BGElement,
    c: &Subgroup,
) -> Result<BGElement> {
    if !x.subgroup.is_subset_of(c) || !y.subgroup.is_subset_of(c) {
        return Err(Error::NotSupported);
    }
    if !g.is_normal(c) {
        return Err(Error::ThetaContractViolated("subgroup is not normal".into()));
    }
    let dual = Dual::new(g, c)?;
    let bx = AltForm::pullback(&dual, &x.dual, &x.form)?;
    let by = AltForm::pullback(&dual, &y.dual, &y.form)?;
    BGElement::from_theta(hopf::r_from_form(g, &dual, &bx.mul(&by)))
}

/// Order of `x` under the partial product (always defined on powers of `x`).
pub fn bg_order(g: &Arc<FiniteGroup>, x: &BGElement) -> Result<usize> {
    let mut acc = x.clone();
    let mut k = 1;
    while !acc.is_trivial() {
        acc = bg_product_via(g, x, &acc, &x.subgroup)?;
        k += 1;
    }
    Ok(k)
}

/// Orbits of `G` acting on `G × G` by simultaneous conjugation. Pairs are
/// encoded as `a·n + b`; orbits are sorted, the orbit of `(1, 1)` first.
pub fn invariant_orbits(g: &FiniteGroup, max_order: usize) -> Result<Vec<Vec<usize>>> {
    check_order(g, max_order)?;
    let n = g.order();
    let mut orbit_of = vec![usize::MAX; n * n];
    let mut orbits = Vec::new();
    for start in 0..n * n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let p = orbit[i];
            for &s in g.generators() {
                let q = g.conj(s, p / n) * n + g.conj(s, p % n);
                if orbit_of[q] == usize::MAX {
                    orbit_of[q] = id;
                    orbit.push(q);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// Dimension of `(k[G] ⊗ k[G])^G`, the number of diagonal conjugation orbits.
pub fn invariant_orbit_dimension(g: &FiniteGroup, max_order: usize) -> Result<usize> {
    Ok(invariant_orbits(g, max_order)?.len())
}

/// True iff the orbit sums spanning `(k[G] ⊗ k[G])^G` pairwise commute, which
/// holds iff every tensor product of irreducibles is multiplicity free.
pub fn has_no_multiplicities(g: &FiniteGroup, max_order: usize) -> Result<bool> {
    let orbits = invariant_orbits(g, max_order)?;
    let n = g.order();
    let mul = |p: usize, q: usize| g.mul(p / n, q / n) * n + g.mul(p % n, q % n);
    let mut left = vec![0u32; n * n];
    let mut right = vec![0u32; n * n];
    for i in 0..orbits.len() {
        for j in i + 1..orbits.len() {
            for &p in &orbits[i] {
                for &q in &orbits[j] {
                    left[mul(p, q)] += 1;
                    right[mul(q, p)] += 1;
                }
            }
            if left != right {
                return Ok(false);
            }
            left.iter_mut().for_each(|v| *v = 0);
            right.iter_mut().for_each(|v| *v = 0);
        }
    }
    Ok(true)
}

/// Outcome of [`lie_complex_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LieCheck {
    pub injective: bool,
    pub exact: bool,
    pub kernel_dim: usize,
}

impl LieCheck {
    pub fn to_json(&self) -> Value {
        json!({"injective": self.injective, "exact": self.exact, "kernel_dim": self.kernel_dim})
    }
}

type SparseVec = BTreeMap<usize, BigRational>;

/// Incremental row echelon form over `Q`.
#[derive(Default)]
struct Echelon {
    rows: HashMap<usize, SparseVec>,
}

impl Echelon {
    /// Reduce `v` against the stored rows; keep it if independent.
    fn insert(&mut self, mut v: SparseVec) -> bool {
        loop {
            let Some((&lead, c)) = v.iter().next() else {
                return false;
            };
            let Some(row) = self.rows.get(&lead) else {
                break;
            };
            let factor = c / &row[&lead];
            for (k, x) in row {
                let e = v.entry(*k).or_insert_with(BigRational::zero);
                *e -= &factor * x;
                if e.is_zero() {
                    v.remove(k);
                }
            }
        }
        let lead = *v.keys().next().unwrap();
        self.rows.insert(lead, v);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn add_entry(v: &mut SparseVec, k: usize, c: i64) {
    let e = v.entry(k).or_insert_with(BigRational::zero);
    *e += BigRational::from_integer(BigInt::from(c));
    if e.is_zero() {
        v.remove(&k);
    }
}

/// Exactness of `0 → k[G] → k[G]^{⊗2} → k[G]^{⊗3}` with maps
/// `Lie δ¹(g) = g⊗1 + 1⊗g − g⊗g` and
/// `D(g⊗h) = 1⊗g⊗h + g⊗h⊗h − g⊗h⊗1 − g⊗g⊗h`, the difference of the
/// linearized right and left coboundaries, in the group basis over `Q`.
pub fn lie_complex_check(g: &FiniteGroup, max_order: usize) -> Result<LieCheck> {
    check_order(g, max_order.min(LIE_CHECK_LIMIT))?;
    let n = g.order();
    let lie1 = |x: usize| {
        let mut v = SparseVec::new();
        add_entry(&mut v, x * n, 1);
        add_entry(&mut v, x, 1);
        add_entry(&mut v, x * n + x, -1);
        v
    };
    let t3 = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let d = |x: usize, y: usize| {
        let mut v = SparseVec::new();
        add_entry(&mut v, t3(0, x, y), 1);
        add_entry(&mut v, t3(x, y, y), 1);
        add_entry(&mut v, t3(x, y, 0), -1);
        add_entry(&mut v, t3(x, x, y), -1);
        v
    };
    let mut image = Echelon::default();
    let mut composite_zero = true;
    for x in 0..n {
        let v = lie1(x);
        let mut dv = SparseVec::new();
        for (k, c) in &v {
            for (kk, cc) in d(k / n, k % n) {
                let e = dv.entry(kk).or_insert_with(BigRational::zero);
                *e += c * cc;
                if e.is_zero() {
                    dv.remove(&kk);
                }
            }
        }
        composite_zero &= dv.is_empty();
        image.insert(v);
    }
    let injective = image.rank() == n;
    let mut dmat = Echelon::default();
    for x in 0..n {
        for y in 0..n {
            dmat.insert(d(x, y));
        }
    }
    let kernel_dim = n * n - dmat.rank();
    let exact = injective && composite_zero && kernel_dim == image.rank();
    Ok(LieCheck {
        injective,
        exact,
        kernel_dim,
    })
}

/// Verdict kind of an [`H2Report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Exact,
    Bounded,
    Undetermined,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::Bounded => "bounded",
            Status::Undetermined => "undetermined",
        }
    }
}

/// One applied rule with the data it used.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub rule: String,
    pub reference: String,
    pub inputs: Value,
}

/// The verdict on `H²ₗ(G)`.
#[derive(Clone, Debug)]
pub struct H2Report {
    pub group: String,
    pub int_mod_inn: usize,
    pub bg: Vec<BGElement>,
    pub order_lower: usize,
    pub order_upper: usize,
    pub exact_order: Option<usize>,
    pub structure: Option<Vec<usize>>,
    pub status: Status,
    pub certificates: Vec<Certificate>,
}

impl H2Report {
    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group,
            "int_mod_inn": self.int_mod_inn,
            "bg_size": self.bg.len(),
            "order_bounds": [self.order_lower, self.order_upper],
            "exact_order": self.exact_order,
            "structure": self.structure,
            "status": self.status.as_str(),
            "certificates": self.certificates.iter().map(|c| json!({
                "rule": c.rule,
                "ref": c.reference,
                "inputs": c.inputs,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Default)]
struct Verdict {
    exact: Option<(usize, String)>,
    structure: Option<Vec<usize>>,
}

impl Verdict {
    fn settle(&mut self, rule: &str, order: usize, structure: Option<Vec<usize>>) -> Result<()> {
        if let Some((prev, by)) = &self.exact {
            if *prev != order {
                return Err(Error::RuleConflict(format!(
                    "{by} gives order {prev}, {rule} gives {order}"
                )));
            }
        } else {
            self.exact = Some((order, rule.to_string()));
        }
        match (&self.structure, structure) {
            (Some(prev), Some(s)) if *prev != s => Err(Error::RuleConflict(format!(
                "structures {prev:?} and {s:?} disagree at {rule}"
            ))),
            (None, Some(s)) => {
                self.structure = Some(s);
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn cert(rule: &str, reference: &str, inputs: Value) -> Certificate {
    Certificate {
        rule: rule.to_string(),
        reference: reference.to_string(),
        inputs,
    }
}

/// Apply the rules in order: abelian groups, trivial `B(G)`, odd order with
/// `Int = Inn`, a unique maximal abelian normal subgroup, coset bounds with
/// verified witnesses, and automorphism-orbit exclusion.
pub fn h2_compute(g: &Arc<FiniteGroup>, max_order: usize) -> Result<H2Report> {
    check_order(g, max_order)?;
    let n = g.order();
    let (_, int_mod_inn) = g.class_preserving_auts(max_order)?;
    let bg = bg_enumerate(g, max_order)?;
    let subgroups = g.normal_abelian_subgroups();
    let mut certificates = Vec::new();
    let mut verdict = Verdict::default();

    // R0
    if g.is_abelian() {
        let orders = g.abelian_structure(&g.whole())?.orders().to_vec();
        let mut factors = Vec::new();
        for i in 0..orders.len() {
            for j in i + 1..orders.len() {
                factors.push(num_integer::gcd(orders[i], orders[j]));
            }
        }
        let structure = invariant_factors(&factors);
        let order = factors.iter().product();
        certificates.push(cert(
            "R0",
            "abelian groups: H2_l(A) is the group of alternating forms on the dual",
            json!({"invariants": orders, "form_factors": factors}),
        ));
        verdict.settle("R0", order, Some(structure))?;
    }

    // R1
    if bg.len() == 1 {
        certificates.push(cert(
            "R1",
            "trivial B(G): H2_l(G) is Int(G)/Inn(G)",
            json!({"bg_size": 1, "int_mod_inn": int_mod_inn}),
        ));
        verdict.settle("R1", int_mod_inn, prime_structure(int_mod_inn))?;
    }

    let odd_inner = n % 2 == 1 && int_mod_inn == 1;

    // R2
    if odd_inner {
        let mut orders = vec![1];
        for x in bg.iter().skip(1) {
            let c = pontryagin::cocycle_from_form_odd(&x.dual, &x.form)?;
            let f = hopf::twist_from_cocycle(g, &x.dual, &c)?;
            if !hopf::is_twist(&f) || !hopf::is_invariant(&f) {
                return Err(Error::RuleConflict(
                    "square-root cocycle does not give an invariant twist".into(),
                ));
            }
            let tv = hopf::theta(&f)?;
            if hopf::r_from_form(g, &tv.dual, &tv.form) != x.canonical_r {
                return Err(Error::RuleConflict("theta does not invert the construction".into()));
            }
            orders.push(bg_order(g, x)?);
        }
        let order = bg.len();
        let structure = elementary_structure(order, &orders);
        certificates.push(cert(
            "R2",
            "odd order with Int = Inn: theta is bijective, element orders from B(G)",
            json!({"bg_size": order, "element_orders": orders, "round_trips": order - 1}),
        ));
        verdict.settle("R2", order, structure)?;
    }

    // R3
    if odd_inner {
        let maximal: Vec<&Subgroup> = subgroups
            .iter()
            .filter(|a| !subgroups.iter().any(|b| b != *a && a.is_subset_of(b)))
            .collect();
        if let [m] = maximal.as_slice() {
            let dual = Dual::new(g, m)?;
            let action = DualAction::new(g, &dual)?;
            let forms = pontryagin::invariant_forms(g, &dual, &action, false, max_order)?;
            let orders: Vec<usize> = forms.iter().map(form_order).collect();
            let structure = abelian_type(&orders);
            certificates.push(cert(
                "R3",
                "unique maximal abelian normal subgroup, odd order, Int = Inn: invariant forms",
                json!({"maximal": m.elements(), "form_count": forms.len()}),
            ));
            verdict.settle("R3", forms.len(), Some(structure))?;
        }
    }

    // R4
    let mut lower = int_mod_inn;
    let mut upper = int_mod_inn * bg.len();
    certificates.push(cert(
        "R4",
        "fibres of theta are cosets of Int(G)/Inn(G)",
        json!({"int_mod_inn": int_mod_inn, "bg_size": bg.len()}),
    ));

    // Elements of B(G) realized by a twist from an invariant cocycle.
    let mut witnessed = BTreeSet::from([0usize]);
    if verdict.exact.is_none() {
        let mut outcomes = Vec::new();
        for (i, x) in bg.iter().enumerate().skip(1) {
            if x.dual.size() > COCYCLE_SEARCH_LIMIT {
                outcomes.push(json!({"element": i, "argument": "skipped"}));
                continue;
            }
            let action = DualAction::new(g, &x.dual)?;
            let acting: Vec<usize> = g.generators().to_vec();
            let search = pontryagin::invariant_cocycle_search(&x.dual, &x.form, &action, &acting)?;
            let argument = match search.argument {
                SearchArgument::Witness => "witness",
                SearchArgument::RangeIndependentObstruction => "obstruction",
                SearchArgument::RangeExhausted => "range_exhausted",
            };
            if let Some(c) = search.cocycle {
                let f = hopf::twist_from_cocycle(g, &x.dual, &c)?;
                let verified = hopf::is_twist(&f)
                    && hopf::is_invariant(&f)
                    && hopf::r_matrix(&f)? == x.canonical_r;
                if verified {
                    witnessed.insert(i);
                }
            }
            outcomes.push(json!({"element": i, "argument": argument, "range": search.range}));
        }
        lower = int_mod_inn * witnessed.len();
        certificates.push(cert(
            "R4w",
            "elements of B(G) carried by an invariant cocycle lie in the image of theta",
            json!({"searches": outcomes, "witnessed": witnessed}),
        ));
    }

    // R5
    if verdict.exact.is_none() && int_mod_inn == 1 && n <= AUT_ORBIT_LIMIT {
        if has_no_multiplicities(g, max_order)? {
            let (auts, complete) = g.automorphisms(AUT_SEARCH_CAP);
            if complete {
                let orbits = bg_orbits(g, &bg, &auts)?;
                let orders: Vec<usize> = bg
                    .iter()
                    .map(|x| bg_order(g, x))
                    .collect::<Result<_>>()?;
                if let Some(sizes) = candidate_sizes(&orbits, &orders, &witnessed) {
                    let (lo, hi) = (sizes[0], *sizes.last().unwrap());
                    lower = lower.max(lo);
                    upper = upper.min(hi);
                    certificates.push(cert(
                        "R5",
                        "no multiplicities: the image of theta is Aut(G)-stable and orders of images divide the order",
                        json!({
                            "orbit_sizes": orbits.iter().map(Vec::len).collect::<Vec<_>>(),
                            "element_orders": orders,
                            "candidate_sizes": sizes,
                        }),
                    ));
                    if sizes.len() == 1 {
                        verdict.settle("R5", lo, prime_structure(lo))?;
                    }
                }
            }
        }
    }

    if verdict.exact.is_none() && lower == upper {
        verdict.settle("R4", lower, prime_structure(lower))?;
    }
    if let Some((order, _)) = &verdict.exact {
        if *order < lower || *order > upper || order % int_mod_inn != 0 {
            return Err(Error::RuleConflict(format!(
                "exact order {order} outside bounds [{lower}, {upper}]"
            )));
        }
        lower = *order;
        upper = *order;
    }
    let status = if verdict.exact.is_some() {
        Status::Exact
    } else if lower > int_mod_inn || upper < int_mod_inn * bg.len() {
        Status::Bounded
    } else {
        Status::Undetermined
    };
    Ok(H2Report {
        group: g.name().to_string(),
        int_mod_inn,
        bg,
        order_lower: lower,
        order_upper: upper,
        exact_order: verdict.exact.map(|(o, _)| o),
        structure: verdict.structure,
        status,
        certificates,
    })
}

fn check_order(g: &FiniteGroup, limit: usize) -> Result<()> {
    if g.order() > limit {
        return Err(Error::OrderLimitExceeded {
            size: g.order(),
            limit,
        });
    }
    Ok(())
}

fn form_order(b: &AltForm) -> usize {
    (1..).find(|&k| b.pow(k as i64).is_trivial()).unwrap()
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn prime_structure(order: usize) -> Option<Vec<usize>> {
    match order {
        1 => Some(Vec::new()),
        p if is_prime(p) => Some(vec![p]),
        _ => None,
    }
}

/// `[p; k]` when `order = p^k` and every nontrivial element has order `p`.
fn elementary_structure(order: usize, element_orders: &[usize]) -> Option<Vec<usize>> {
    if order == 1 {
        return Some(Vec::new());
    }
    let p = *element_orders.iter().find(|&&o| o > 1)?;
    if !is_prime(p) || element_orders.iter().any(|&o| o != 1 && o != p) {
        return None;
    }
    let mut m = order;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then(|| vec![p; k])
}

fn prime_factors(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    out
}

/// Invariant factors `d₁ | d₂ | …` of `⊕ Z/mᵢ`, dropping trivial factors.
pub fn invariant_factors(cyclic: &[usize]) -> Vec<usize> {
    let mut by_prime: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &m in cyclic {
        let mut rest = m;
        for p in prime_factors(m) {
            let mut q = 1;
            while rest % p == 0 {
                rest /= p;
                q *= p;
            }
            by_prime.entry(p).or_default().push(q);
        }
    }
    merge_primary(by_prime)
}

fn merge_primary(mut by_prime: BTreeMap<usize, Vec<usize>>) -> Vec<usize> {
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    for v in by_prime.values_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v.resize(len, 1);
    }
    let mut out: Vec<usize> = (0..len)
        .map(|i| by_prime.values().map(|v| v[i]).product())
        .collect();
    out.reverse();
    out
}

/// Invariant factors of a finite abelian group given the multiset of its
/// element orders.
pub fn abelian_type(element_orders: &[usize]) -> Vec<usize> {
    let n = element_orders.len();
    let mut by_prime = BTreeMap::new();
    for p in prime_factors(n) {
        // s[k] = #{x : x^{p^k} = 1}, so the number of cyclic factors of order
        // ≥ p^k is log_p(s[k] / s[k-1]).
        let mut s = vec![1usize];
        let mut q = 1;
        while *s.last().unwrap() < p_part(n, p) {
            q *= p;
            s.push(element_orders.iter().filter(|&&o| q % o == 0).count());
        }
        let at_least: Vec<usize> = s.windows(2).map(|w| log(p, w[1] / w[0])).collect();
        let mut parts = Vec::new();
        for (k, &c) in at_least.iter().enumerate() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..c - next {
                parts.push(p.pow(k as u32 + 1));
            }
        }
        by_prime.insert(p, parts);
    }
    merge_primary(by_prime)
}

fn p_part(mut n: usize, p: usize) -> usize {
    let mut q = 1;
    while n % p == 0 {
        n /= p;
        q *= p;
    }
    q
}

fn log(p: usize, mut m: usize) -> usize {
    let mut k = 0;
    while m > 1 {
        m /= p;
        k += 1;
    }
    k
}

/// Orbits of `Aut(G)` on `B(G)` as sorted index lists, acting through
/// `R(A, b) ↦ (φ ⊗ φ)(R(A, b))`.
fn bg_orbits(g: &Arc<FiniteGroup>, bg: &[BGElement], auts: &[GroupMap]) -> Result<Vec<Vec<usize>>> {
    let mut orbit_of = vec![usize::MAX; bg.len()];
    let mut orbits = Vec::new();
    for i in 0..bg.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = Vec::new();
        for phi in auts {
            let r = &bg[i].canonical_r;
            let image = GTensor::from_terms(
                g,
                2,
                r.terms()
                    .map(|(t, c)| (t.iter().map(|&x| phi.apply(x)).collect(), c.clone())),
            );
            let j = bg
                .iter()
                .position(|y| y.canonical_r == image)
                .ok_or_else(|| Error::RuleConflict("B(G) is not Aut(G)-stable".into()))?;
            if orbit_of[j] == usize::MAX {
                orbit_of[j] = id;
                orbit.push(j);
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// Sizes of unions of orbits that contain every required element and could
/// be a group whose elements have the given orders (or multiples of them):
/// each order divides the size, and each prime dividing the size occurs.
fn candidate_sizes(
    orbits: &[Vec<usize>],
    orders: &[usize],
    required: &BTreeSet<usize>,
) -> Option<Vec<usize>> {
    if orbits.len() > ORBIT_UNION_LIMIT {
        return None;
    }
    let mut sizes = BTreeSet::new();
    for mask in 0u32..(1 << orbits.len()) {
        let members: Vec<usize> = orbits
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .flat_map(|(_, o)| o.iter().copied())
            .collect();
        if !required.iter().all(|r| members.contains(r)) {
            continue;
        }
        let size = members.len();
        let lagrange = members.iter().all(|&x| size % orders[x] == 0);
        let cauchy = prime_factors(size)
            .into_iter()
            .all(|p| members.iter().any(|&x| orders[x] == p));
        if lagrange && cauchy {
            sizes.insert(size);
        }
    }
    Some(sizes.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factor_merging() {
        assert_eq!(invariant_factors(&[2, 3]), vec![6]);
        assert_eq!(invariant_factors(&[2, 4, 1]), vec![2, 4]);
        assert_eq!(invariant_factors(&[]), Vec::<usize>::new());
        assert_eq!(invariant_factors(&[6, 4]), vec![2, 12]);
    }

    #[test]
    fn abelian_type_from_orders() {
        // Z/3 × Z/3
        assert_eq!(abelian_type(&[1, 3, 3, 3, 3, 3, 3, 3, 3]), vec![3, 3]);
        // Z/2 × Z/4
        assert_eq!(abelian_type(&[1, 2, 2, 2, 4, 4, 4, 4]), vec![2, 4]);
        // Z/6
        assert_eq!(abelian_type(&[1, 2, 3, 3, 6, 6]), vec![6]);
        assert_eq!(abelian_type(&[1]), Vec::<usize>::new());
    }

    #[test]
    fn elementary_structure_detection() {
        assert_eq!(elementary_structure(9, &[1, 3, 3, 3, 3, 3, 3, 3, 3]), Some(vec![3, 3]));
        assert_eq!(elementary_structure(4, &[1, 2, 4, 4]), None);
        assert_eq!(elementary_structure(1, &[1]), Some(vec![]));
    }
}
