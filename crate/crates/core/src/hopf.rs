//! Elements of `k[G]^{⊗d}` for `d = 1, 2, 3`: Hopf structure maps, twists,
//! gauge action, R-matrices, Drinfeld elements, socles and `Θ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::cyclo::{CycNum, Root};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Subgroup};
use crate::pontryagin::{AltForm, Character, Cocycle, Dual, DualAction};

/// Largest non-abelian subgroup of `G^d` in which tensors are inverted.
pub const NONABELIAN_INVERSE_LIMIT: usize = 256;

/// Largest abelian subgroup of `G^d` inverted through its characters.
pub const FOURIER_INVERSE_LIMIT: usize = 4096;

/// An element of `k[G]^{⊗d}` with sparse coefficients on basis tuples.
#[derive(Clone)]
pub struct GTensor {
    group: Arc<FiniteGroup>,
    degree: usize,
    terms: BTreeMap<usize, CycNum>,
}

impl PartialEq for GTensor {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.group.order() == other.group.order()
            && self.terms == other.terms
    }
}

impl Eq for GTensor {}

impl fmt::Debug for GTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let labels: Vec<String> = t.iter().map(|&g| self.group.label(g)).collect();
            write!(f, "({c})[{}]", labels.join("⊗"))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl GTensor {
    pub fn zero(group: &Arc<FiniteGroup>, degree: usize) -> GTensor {
        assert!((1..=3).contains(&degree), "degree must be 1, 2 or 3");
        GTensor {
            group: group.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `1 ⊗ … ⊗ 1`.
    pub fn one(group: &Arc<FiniteGroup>, degree: usize) -> GTensor {
        GTensor::scalar(group, degree, CycNum::one())
    }

    pub fn scalar(group: &Arc<FiniteGroup>, degree: usize, c: CycNum) -> GTensor {
        let mut t = GTensor::zero(group, degree);
        t.add_term(0, c);
        t
    }

    /// A single basis tensor `g₁ ⊗ … ⊗ g_d`.
    pub fn basis(group: &Arc<FiniteGroup>, tuple: &[usize]) -> GTensor {
        GTensor::from_terms(group, tuple.len(), [(tuple.to_vec(), CycNum::one())])
    }

    pub fn from_terms(
        group: &Arc<FiniteGroup>,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, CycNum)>,
    ) -> GTensor {
        let mut t = GTensor::zero(group, degree);
        for (tuple, c) in terms {
            assert_eq!(tuple.len(), degree);
            assert!(tuple.iter().all(|&g| g < group.order()));
            let k = t.pack(&tuple);
            t.add_term(k, c);
        }
        t
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn pack(&self, tuple: &[usize]) -> usize {
        let n = self.group.order();
        tuple.iter().fold(0, |acc, &g| acc * n + g)
    }

    fn unpack(&self, mut k: usize) -> Vec<usize> {
        let n = self.group.order();
        let mut t = vec![0; self.degree];
        for i in (0..self.degree).rev() {
            t[i] = k % n;
            k /= n;
        }
        t
    }

    fn add_term(&mut self, k: usize, c: CycNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    /// Terms as `(tuple, coefficient)`, in lexicographic tuple order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &CycNum)> + '_ {
        self.terms.iter().map(|(&k, c)| (self.unpack(k), c))
    }

    /// Coefficient of a basis tuple.
    pub fn coeff(&self, tuple: &[usize]) -> CycNum {
        self.terms
            .get(&self.pack(tuple))
            .cloned()
            .unwrap_or_else(CycNum::zero)
    }

    fn check_same(&self, other: &GTensor) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        assert!(
            Arc::ptr_eq(&self.group, &other.group) || self.group.order() == other.group.order(),
            "tensors over different groups"
        );
        Ok(())
    }

    pub fn add(&self, other: &GTensor) -> Result<GTensor> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GTensor) -> Result<GTensor> {
        self.add(&other.scale(&CycNum::from_int(-1)))
    }

    pub fn scale(&self, c: &CycNum) -> GTensor {
        let mut out = GTensor::zero(&self.group, self.degree);
        if c.is_zero() {
            return out;
        }
        for (&k, v) in &self.terms {
            out.terms.insert(k, v * c);
        }
        out
    }

    /// Product in `k[G]^{⊗d} = k[G^d]`.
    pub fn mul(&self, other: &GTensor) -> Result<GTensor> {
        self.check_same(other)?;
        let g = &self.group;
        let mut acc: HashMap<usize, CycNum> = HashMap::new();
        for (&ka, ca) in &self.terms {
            let ta = self.unpack(ka);
            for (&kb, cb) in &other.terms {
                let tb = self.unpack(kb);
                let t: Vec<usize> = ta.iter().zip(&tb).map(|(&x, &y)| g.mul(x, y)).collect();
                let k = self.pack(&t);
                let v = ca * cb;
                match acc.get_mut(&k) {
                    Some(e) => *e = &*e + &v,
                    None => {
                        acc.insert(k, v);
                    }
                }
            }
        }
        let mut out = GTensor::zero(&self.group, self.degree);
        out.terms = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(out)
    }

    /// Apply a map on basis tuples, linearly.
    fn map_basis(&self, degree: usize, f: impl Fn(&[usize]) -> Vec<usize>) -> GTensor {
        let mut out = GTensor::zero(&self.group, degree);
        for (&k, c) in &self.terms {
            let t = f(&self.unpack(k));
            let kk = out.pack(&t);
            out.add_term(kk, c.clone());
        }
        out
    }

    /// `Δ(g) = g ⊗ g`, extended linearly from degree 1.
    pub fn coproduct(&self) -> GTensor {
        assert_eq!(self.degree, 1);
        self.map_basis(2, |t| vec![t[0], t[0]])
    }

    /// `ε(g) = 1` on every leg.
    pub fn counit(&self) -> CycNum {
        self.terms.values().fold(CycNum::zero(), |acc, c| &acc + c)
    }

    /// `S(g) = g⁻¹` on every leg.
    pub fn antipode(&self) -> GTensor {
        self.map_basis(self.degree, |t| t.iter().map(|&g| self.group.inv(g)).collect())
    }

    /// `F₂₁` for a degree-2 tensor.
    pub fn flip(&self) -> GTensor {
        assert_eq!(self.degree, 2);
        self.map_basis(2, |t| vec![t[1], t[0]])
    }

    /// `(Δ ⊗ id)(F)`.
    pub fn coproduct_left(&self) -> GTensor {
        assert_eq!(self.degree, 2);
        self.map_basis(3, |t| vec![t[0], t[0], t[1]])
    }

    /// `(id ⊗ Δ)(F)`.
    pub fn coproduct_right(&self) -> GTensor {
        assert_eq!(self.degree, 2);
        self.map_basis(3, |t| vec![t[0], t[1], t[1]])
    }

    /// Place a degree-2 tensor on legs `(i, j)` of a degree-3 tensor, with 1 on
    /// the remaining leg.
    pub fn legs(&self, i: usize, j: usize) -> GTensor {
        assert_eq!(self.degree, 2);
        assert!(i != j && i < 3 && j < 3);
        self.map_basis(3, |t| {
            let mut out = vec![0; 3];
            out[i] = t[0];
            out[j] = t[1];
            out
        })
    }

    /// `a ⊗ a` for a degree-1 tensor.
    pub fn square_tensor(&self) -> GTensor {
        assert_eq!(self.degree, 1);
        let mut out = GTensor::zero(&self.group, 2);
        for (&ka, ca) in &self.terms {
            for (&kb, cb) in &self.terms {
                let k = out.pack(&[ka, kb]);
                out.add_term(k, ca * cb);
            }
        }
        out
    }

    /// Multiplicative inverse, or `NotInvertible`.
    ///
    /// The work happens inside `k[H]` for the subgroup `H ⊆ G^d` generated by
    /// the support: by characters when `H` is abelian, through the minimal
    /// polynomial of `x` otherwise.
    pub fn inv(&self) -> Result<GTensor> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        if self.terms.len() == 1 {
            let (&k, c) = self.terms.iter().next().unwrap();
            let t: Vec<usize> = self.unpack(k).iter().map(|&g| self.group.inv(g)).collect();
            return Ok(GTensor::from_terms(&self.group, self.degree, [(t, c.inv()?)]));
        }
        let h = SupportGroup::new(self);
        if h.is_abelian() {
            if h.order() > FOURIER_INVERSE_LIMIT {
                return Err(Error::OrderLimitExceeded {
                    size: h.order(),
                    limit: FOURIER_INVERSE_LIMIT,
                });
            }
            h.fourier_inverse(self)
        } else {
            if h.order() > NONABELIAN_INVERSE_LIMIT {
                return Err(Error::OrderLimitExceeded {
                    size: h.order(),
                    limit: NONABELIAN_INVERSE_LIMIT,
                });
            }
            h.krylov_inverse(self)
        }
    }

    /// Drinfeld element `u_R = Σ S(tᵢ) sᵢ` of `R = Σ sᵢ ⊗ tᵢ`.
    pub fn drinfeld_element(&self) -> GTensor {
        assert_eq!(self.degree, 2);
        let g = &self.group;
        self.map_basis(1, |t| vec![g.mul(g.inv(t[1]), t[0])])
    }

    /// Subgroup generated by every group element occurring in any leg.
    pub fn socle(&self) -> Subgroup {
        let mut elems: Vec<usize> = self.terms().flat_map(|(t, _)| t).collect();
        elems.sort_unstable();
        elems.dedup();
        self.group.generate(&elems)
    }

    /// `{"group": name, "degree": d, "terms": [{"g": [...], "c": CycNum}]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(t, c)| json!({"g": t, "c": c.to_json()}))
            .collect();
        json!({"group": self.group.name(), "degree": self.degree, "terms": terms})
    }

    /// Parse the terms of a tensor over an already resolved group.
    pub fn from_json(group: &Arc<FiniteGroup>, v: &Value) -> Result<GTensor> {
        let degree = v
            .get("degree")
            .and_then(Value::as_u64)
            .filter(|d| (1..=3).contains(d))
            .ok_or_else(|| Error::parse("tensor degree must be 1, 2 or 3"))? as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("tensor needs a \"terms\" array"))?;
        let mut out = GTensor::zero(group, degree);
        for t in terms {
            let tuple: Vec<usize> = t
                .get("g")
                .and_then(Value::as_array)
                .filter(|g| g.len() == degree)
                .ok_or_else(|| Error::parse("term \"g\" must list one index per leg"))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|x| x as usize)
                        .filter(|&x| x < group.order())
                        .ok_or_else(|| Error::parse("element index out of range"))
                })
                .collect::<Result<_>>()?;
            let c = CycNum::from_json(
                t.get("c")
                    .ok_or_else(|| Error::parse("term needs a coefficient \"c\""))?,
            )?;
            let k = out.pack(&tuple);
            out.add_term(k, c);
        }
        Ok(out)
    }
}

/// The subgroup `H ⊆ G^d` generated by the support of a tensor.
struct SupportGroup {
    elems: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    group: Arc<FiniteGroup>,
}

impl SupportGroup {
    fn new(x: &GTensor) -> SupportGroup {
        let g = x.group.clone();
        let gens: Vec<Vec<usize>> = x.terms().map(|(t, _)| t).collect();
        let id = vec![0; x.degree];
        let mut elems = vec![id.clone()];
        let mut index = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for s in &gens {
                let p: Vec<usize> = elems[i].iter().zip(s).map(|(&a, &b)| g.mul(a, b)).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }
        SupportGroup {
            elems,
            index,
            group: g,
        }
    }

    fn order(&self) -> usize {
        self.elems.len()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let p: Vec<usize> = self.elems[a]
            .iter()
            .zip(&self.elems[b])
            .map(|(&x, &y)| self.group.mul(x, y))
            .collect();
        self.index[&p]
    }

    fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    fn table(&self) -> FiniteGroup {
        let n = self.order();
        let table = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| self.mul(a, b)).collect();
        FiniteGroup::from_flat("support".into(), n, table, None)
    }

    fn coefficients(&self, x: &GTensor) -> Vec<(usize, CycNum)> {
        x.terms().map(|(t, c)| (self.index[&t], c.clone())).collect()
    }

    fn to_tensor(&self, x: &GTensor, coeffs: Vec<(usize, CycNum)>) -> GTensor {
        GTensor::from_terms(
            &x.group,
            x.degree,
            coeffs.into_iter().map(|(h, c)| (self.elems[h].clone(), c)),
        )
    }

    fn fourier_inverse(&self, x: &GTensor) -> Result<GTensor> {
        let hg = self.table();
        let dual = Dual::new(&hg, &hg.whole())?;
        let n = hg.order();
        let e = dual.exponent() as u32;
        let coeffs = self.coefficients(x);
        // χ(x) for every character, inverted
        let mut inv_vals = Vec::with_capacity(n);
        for ci in 0..n {
            let mut v = CycNum::zero();
            for (h, c) in &coeffs {
                let r = Root::new(dual.value_exp(ci, *h) as i64, e);
                v = &v + &(c * &r.to_cyc());
            }
            inv_vals.push(v.inv().map_err(|_| Error::NotInvertible)?);
        }
        // coefficient of h is |H|⁻¹ Σ_χ χ(x)⁻¹ χ(h⁻¹)
        let scale = CycNum::frac(1, n as i64);
        let mut out = Vec::with_capacity(n);
        for h in 0..n {
            let hi = hg.inv(h);
            let mut v = CycNum::zero();
            for (ci, iv) in inv_vals.iter().enumerate() {
                let r = Root::new(dual.value_exp(ci, hi) as i64, e);
                v = &v + &(iv * &r.to_cyc());
            }
            out.push((h, &v * &scale));
        }
        Ok(self.to_tensor(x, out))
    }

    /// Inverse through the minimal polynomial of `x`: the first linear
    /// dependency `Σ cᵢ xⁱ = 0` among the powers of `x` gives
    /// `x⁻¹ = −c₀⁻¹ Σ_{i≥1} cᵢ xⁱ⁻¹`, and `c₀ = 0` means `x` is a zero divisor.
    fn krylov_inverse(&self, x: &GTensor) -> Result<GTensor> {
        let n = self.order();
        let table: Vec<usize> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| self.mul(a, b)).collect();
        let coeffs = self.coefficients(x);
        let times_x = |v: &[CycNum]| {
            let mut out = vec![CycNum::zero(); n];
            for (h, vh) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (s, c) in &coeffs {
                    let k = table[h * n + s];
                    out[k] = &out[k] + &(vh * c);
                }
            }
            out
        };
        let mut unit = vec![CycNum::zero(); n];
        unit[0] = CycNum::one();
        let mut powers = vec![unit];
        // reduced powers, each with a unit pivot and its expression in the powers
        let mut basis: Vec<(usize, Vec<CycNum>, Vec<CycNum>)> = Vec::new();
        for k in 0..=n {
            let mut v = powers[k].clone();
            let mut combo = vec![CycNum::zero(); k + 1];
            combo[k] = CycNum::one();
            for (p, b, cb) in &basis {
                if v[*p].is_zero() {
                    continue;
                }
                let f = v[*p].clone();
                for (vi, bi) in v.iter_mut().zip(b) {
                    if !bi.is_zero() {
                        *vi = &*vi - &(&f * bi);
                    }
                }
                for (ci, bi) in combo.iter_mut().zip(cb) {
                    if !bi.is_zero() {
                        *ci = &*ci - &(&f * bi);
                    }
                }
            }
            match v.iter().position(|c| !c.is_zero()) {
                Some(p) => {
                    let s = v[p].inv()?;
                    let v: Vec<CycNum> = v.iter().map(|c| c * &s).collect();
                    let combo: Vec<CycNum> = combo.iter().map(|c| c * &s).collect();
                    basis.push((p, v, combo));
                    let next = times_x(&powers[k]);
                    powers.push(next);
                }
                None => {
                    let c0 = combo[0].inv().map_err(|_| Error::NotInvertible)?;
                    let mut out = vec![CycNum::zero(); n];
                    for (i, ci) in combo.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()) {
                        for (o, p) in out.iter_mut().zip(&powers[i - 1]) {
                            if !p.is_zero() {
                                *o = &*o - &(ci * p);
                            }
                        }
                    }
                    let sol = out.into_iter().map(|c| &c * &c0).enumerate().collect();
                    return Ok(self.to_tensor(x, sol));
                }
            }
        }
        unreachable!("powers of an element of a {n}-dimensional algebra are dependent")
    }
}

/// `δ¹(a) = (a ⊗ a) Δ(a⁻¹)`.
pub fn delta1(a: &GTensor) -> Result<GTensor> {
    a.square_tensor().mul(&a.inv()?.coproduct())
}

/// `δ²_L(F) = (F ⊗ 1)(Δ ⊗ id)(F)`.
pub fn delta2_left(f: &GTensor) -> Result<GTensor> {
    f.legs(0, 1).mul(&f.coproduct_left())
}

/// `δ²_R(F) = (1 ⊗ F)(id ⊗ Δ)(F)`.
pub fn delta2_right(f: &GTensor) -> Result<GTensor> {
    f.legs(1, 2).mul(&f.coproduct_right())
}

/// Twist equation plus invertibility.
pub fn is_twist(f: &GTensor) -> bool {
    if f.degree() != 2 {
        return false;
    }
    match (delta2_left(f), delta2_right(f)) {
        (Ok(l), Ok(r)) if l == r => f.inv().is_ok(),
        _ => false,
    }
}

/// The first generator of `G` whose coproduct does not commute with `F`.
pub fn invariance_failure(f: &GTensor) -> Option<usize> {
    let g = f.group();
    g.generators().iter().copied().find(|&x| {
        let gi = g.inv(x);
        f.map_basis(2, |t| vec![g.mul(g.mul(x, t[0]), gi), g.mul(g.mul(x, t[1]), gi)]) != *f
    })
}

/// `Δ(g) F = F Δ(g)` for all `g ∈ G`.
pub fn is_invariant(f: &GTensor) -> bool {
    f.degree() == 2 && invariance_failure(f).is_none()
}

/// `(ε ⊗ ε)(F) = 1`.
pub fn is_normalized(f: &GTensor) -> bool {
    f.counit().is_one()
}

/// Scale `F` by `(ε ⊗ ε)(F)⁻¹`.
pub fn normalize(f: &GTensor) -> Result<GTensor> {
    Ok(f.scale(&f.counit().inv().map_err(|_| Error::NotInvertible)?))
}

/// `a·F = (a ⊗ a) F Δ(a⁻¹)`.
pub fn gauge(a: &GTensor, f: &GTensor) -> Result<GTensor> {
    a.square_tensor().mul(f)?.mul(&a.inv()?.coproduct())
}

/// Quasi-triangularity of a degree-2 tensor:
/// `(Δ ⊗ id)(R) = R₁₃R₂₃` and `(id ⊗ Δ)(R) = R₁₃R₁₂`.
pub fn satisfies_r_axioms(r: &GTensor) -> Result<bool> {
    let left = r.coproduct_left() == r.legs(0, 2).mul(&r.legs(1, 2))?;
    let right = r.coproduct_right() == r.legs(0, 2).mul(&r.legs(0, 1))?;
    Ok(left && right)
}

/// `R_F = F₂₁ F⁻¹` for an invariant twist.
pub fn r_matrix(f: &GTensor) -> Result<GTensor> {
    if !is_twist(f) {
        return Err(Error::NotATwist);
    }
    if let Some(g) = invariance_failure(f) {
        return Err(Error::NotInvariant(g));
    }
    let r = f.flip().mul(&f.inv()?)?;
    if !satisfies_r_axioms(&r)? {
        return Err(Error::ThetaContractViolated(
            "F₂₁F⁻¹ fails the R-matrix axioms".into(),
        ));
    }
    Ok(r)
}

/// `e_χ = |A|⁻¹ Σ_a χ(a⁻¹) a`.
pub fn idempotent(group: &Arc<FiniteGroup>, dual: &Dual, chi: &Character) -> GTensor {
    let n = dual.size() as i64;
    let e = dual.exponent() as u32;
    let ci = dual.index_of(chi);
    let scale = CycNum::frac(1, n);
    GTensor::from_terms(
        group,
        1,
        dual.subgroup().elements().iter().enumerate().map(|(pos, &a)| {
            let v = dual.value_exp(ci, pos);
            (vec![a], &Root::new(-(v as i64), e).to_cyc() * &scale)
        }),
    )
}

/// `χ ↦ Σ λ_g χ(g⁻¹)` for `x = Σ λ_g g` supported in `k[A]`.
pub fn fourier(dual: &Dual, x: &GTensor) -> Result<Vec<CycNum>> {
    if x.degree() != 1 {
        return Err(Error::DegreeMismatch(x.degree(), 1));
    }
    let terms: Vec<(usize, CycNum)> = x
        .terms()
        .map(|(t, c)| {
            let pos = dual
                .subgroup()
                .elements()
                .binary_search(&t[0])
                .map_err(|_| Error::NotSupported)?;
            Ok((pos, c.clone()))
        })
        .collect::<Result<_>>()?;
    let e = dual.exponent() as u32;
    Ok((0..dual.size())
        .map(|ci| {
            terms.iter().fold(CycNum::zero(), |acc, (pos, c)| {
                let r = Root::new(-(dual.value_exp(ci, *pos) as i64), e);
                &acc + &(c * &r.to_cyc())
            })
        })
        .collect())
}

/// `Σ_{ρ,σ} v(ρ,σ) e_ρ ⊗ e_σ` for a table of roots of unity, by counting
/// exponents for each output coefficient.
fn idempotent_sum_roots(group: &Arc<FiniteGroup>, dual: &Dual, v: &[Vec<Root>]) -> GTensor {
    let n = dual.size();
    let e = dual.exponent() as u32;
    let l = v
        .iter()
        .flatten()
        .fold(e, |acc, r| num_integer::lcm(acc, r.order()));
    let els = dual.subgroup().elements();
    let vexp: Vec<Vec<usize>> = v
        .iter()
        .map(|row| row.iter().map(|r| r.exponent_mod(l).unwrap() as usize).collect())
        .collect();
    let step = (l / e) as usize;
    let mut terms = Vec::new();
    let denom = (n * n) as i64;
    let mut counts = vec![0i64; l as usize];
    for (pa, &a) in els.iter().enumerate() {
        for (pb, &b) in els.iter().enumerate() {
            counts.iter_mut().for_each(|c| *c = 0);
            for rho in 0..n {
                let ra = dual.value_exp(rho, pa) * step;
                for sigma in 0..n {
                    let sb = dual.value_exp(sigma, pb) * step;
                    // v(ρ,σ) ρ(a⁻¹) σ(b⁻¹)
                    let k = (vexp[rho][sigma] + 2 * l as usize - ra - sb) % l as usize;
                    counts[k] += 1;
                }
            }
            let c = CycNum::from_exponent_counts(l, &counts, denom);
            terms.push((vec![a, b], c));
        }
    }
    GTensor::from_terms(group, 2, terms)
}

/// `Σ_{ρ,σ} v(ρ,σ) e_ρ ⊗ e_σ` for arbitrary field values, as a separable transform.
fn idempotent_sum(group: &Arc<FiniteGroup>, dual: &Dual, v: &[Vec<CycNum>]) -> GTensor {
    if let Some(roots) = v
        .iter()
        .map(|row| row.iter().map(CycNum::as_root).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
    {
        return idempotent_sum_roots(group, dual, &roots);
    }
    let n = dual.size();
    let e = dual.exponent() as u32;
    let els = dual.subgroup().elements();
    let root = |ci: usize, pos: usize| Root::new(-(dual.value_exp(ci, pos) as i64), e).to_cyc();
    // t[ρ][b] = Σ_σ v(ρ,σ) σ(b⁻¹)
    let t: Vec<Vec<CycNum>> = (0..n)
        .map(|rho| {
            (0..n)
                .map(|pb| {
                    (0..n).fold(CycNum::zero(), |acc, s| &acc + &(&v[rho][s] * &root(s, pb)))
                })
                .collect()
        })
        .collect();
    let scale = CycNum::from_rational(BigRational::new(BigInt::one(), BigInt::from(n * n)));
    let mut terms = Vec::new();
    for (pa, &a) in els.iter().enumerate() {
        for (pb, &b) in els.iter().enumerate() {
            let c = (0..n).fold(CycNum::zero(), |acc, rho| &acc + &(&t[rho][pb] * &root(rho, pa)));
            terms.push((vec![a, b], &c * &scale));
        }
    }
    GTensor::from_terms(group, 2, terms)
}

/// `F = Σ c(ρ,σ) e_ρ ⊗ e_σ` for a normalized two-cocycle on `Â`.
pub fn twist_from_cocycle(group: &Arc<FiniteGroup>, dual: &Dual, c: &Cocycle) -> Result<GTensor> {
    if c.size() != dual.size() || !c.is_normalized() || !c.is_cocycle(dual) {
        return Err(Error::NotACocycle);
    }
    Ok(idempotent_sum(group, dual, &c.values))
}

/// `c(ρ,σ) = (ρ ⊗ σ)(F)` for `F` supported in `k[A] ⊗ k[A]`.
pub fn cocycle_from_twist(dual: &Dual, f: &GTensor) -> Result<Cocycle> {
    let pairs = pair_values(dual, f)?;
    Ok(Cocycle { values: pairs })
}

/// `(ρ ⊗ σ)(X)` for every pair of characters.
fn pair_values(dual: &Dual, x: &GTensor) -> Result<Vec<Vec<CycNum>>> {
    if x.degree() != 2 {
        return Err(Error::DegreeMismatch(x.degree(), 2));
    }
    let els = dual.subgroup().elements();
    let terms: Vec<(usize, usize, &CycNum)> = x
        .terms()
        .map(|(t, c)| {
            let pa = els.binary_search(&t[0]).map_err(|_| Error::NotSupported)?;
            let pb = els.binary_search(&t[1]).map_err(|_| Error::NotSupported)?;
            Ok((pa, pb, c))
        })
        .collect::<Result<_>>()?;
    let n = dual.size();
    let e = dual.exponent() as u32;
    Ok((0..n)
        .map(|rho| {
            (0..n)
                .map(|sigma| {
                    terms.iter().fold(CycNum::zero(), |acc, &(pa, pb, c)| {
                        let k = dual.value_exp(rho, pa) + dual.value_exp(sigma, pb);
                        &acc + &(c * &Root::new(k as i64, e).to_cyc())
                    })
                })
                .collect()
        })
        .collect())
}

/// `R(A, b) = Σ_{σ,τ} b(σ,τ) e_σ ⊗ e_τ`.
pub fn r_from_form(group: &Arc<FiniteGroup>, dual: &Dual, b: &AltForm) -> GTensor {
    let n = dual.size();
    let v: Vec<Vec<Root>> = (0..n)
        .map(|s| (0..n).map(|t| b.eval_idx(dual, s, t)).collect())
        .collect();
    idempotent_sum_roots(group, dual, &v)
}

/// The pair `(A, b)` attached to an invariant twist.
#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub socle: Subgroup,
    pub dual: Dual,
    pub form: AltForm,
}

/// `Θ(F) = (A, b)` with `A` the socle of `R_F` and `b(σ,τ) = (σ ⊗ τ)(R_F)`.
/// The defining properties of the pair are verified before returning.
pub fn theta(f: &GTensor) -> Result<ThetaValue> {
    let r = r_matrix(f)?;
    theta_of_r(&r)
}

/// [`theta`] starting from an already computed `R_F`.
pub fn theta_of_r(r: &GTensor) -> Result<ThetaValue> {
    let g = r.group().clone();
    let violated = |m: &str| Error::ThetaContractViolated(m.to_string());
    let socle = r.socle();
    if !g.is_abelian_subgroup(&socle) {
        return Err(violated("socle is not abelian"));
    }
    if !g.is_normal(&socle) {
        return Err(violated("socle is not normal"));
    }
    let dual = Dual::new(&g, &socle).map_err(|_| violated("socle is not abelian"))?;
    let values = pair_values(&dual, r)?;
    let form = AltForm::from_values(&dual, |a, b| {
        values[a][b].as_root().ok_or(Error::NotACocycle)
    })
    .map_err(|_| violated("pairing with R_F is not an alternating bilinear form"))?;
    if !form.is_nondegenerate(&dual) {
        return Err(violated("form is degenerate"));
    }
    let action = DualAction::new(&g, &dual)?;
    if !form.is_invariant(&dual, &action, g.generators()) {
        return Err(violated("form is not G-invariant"));
    }
    if r_from_form(&g, &dual, &form) != *r {
        return Err(violated("R_F differs from R(A, b)"));
    }
    Ok(ThetaValue { socle, dual, form })
}
