//! Named groups used throughout the test and example suites.

use std::sync::Arc;

use serde_json::Value;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, DEFAULT_PERM_BOUND, TABLE_LIMIT};
use crate::hopf::GTensor;

/// Names accepted by [`by_name`] besides the `C<n>` / `C<a>xC<b>…` families.
pub const NAMED: &[&str] = &[
    "A4", "S3", "S4", "D8", "Q8", "C27sd", "Wall32", "Wr_2", "Wr_3", "Wr_5", "V4", "Klein",
];

/// Look up a builtin group.
pub fn by_name(name: &str) -> Result<FiniteGroup> {
    let g = match name {
        "A4" => a4(),
        "S3" => perm_group(3, &[vec![2, 1, 3], vec![2, 3, 1]]),
        "S4" => perm_group(4, &[vec![2, 1, 3, 4], vec![2, 3, 4, 1]]),
        "D8" => wreath(2)?,
        "Q8" => q8(),
        "C27sd" => c27sd(),
        "Wall32" => wall32(),
        "V4" | "Klein" => abelian(&[2, 2]),
        _ => {
            if let Some(p) = name.strip_prefix("Wr_") {
                match p {
                    "2" | "3" | "5" => wreath(p.parse().unwrap())?,
                    _ => return Err(Error::UnknownFixture(name.into())),
                }
            } else if let Some(orders) = parse_abelian_name(name) {
                let total: usize = orders.iter().product();
                if total > TABLE_LIMIT {
                    return Err(Error::OrderLimitExceeded {
                        size: total,
                        limit: TABLE_LIMIT,
                    });
                }
                abelian(&orders)
            } else {
                return Err(Error::UnknownFixture(name.into()));
            }
        }
    };
    Ok(g.with_name(name))
}

fn parse_abelian_name(name: &str) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for part in name.split('x') {
        let d: usize = part.strip_prefix('C')?.parse().ok()?;
        if d == 0 || d > TABLE_LIMIT {
            return None;
        }
        out.push(d);
    }
    Some(out)
}

fn perm_group(degree: usize, gens: &[Vec<usize>]) -> FiniteGroup {
    FiniteGroup::from_permutations(degree, gens, DEFAULT_PERM_BOUND).expect("fixture closes")
}

/// A4 generated by `(1,2)(3,4)` and `(1,2,3)`.
pub fn a4() -> FiniteGroup {
    perm_group(4, &[vec![2, 1, 4, 3], vec![2, 3, 1, 4]]).with_name("A4")
}

/// Index of the element with the given label.
pub fn element_by_label(g: &FiniteGroup, label: &str) -> Option<usize> {
    (0..g.order()).find(|&x| g.label(x) == label)
}

fn from_rule(
    name: &str,
    n: usize,
    mul: impl Fn(usize, usize) -> usize,
    label: impl Fn(usize) -> String,
) -> FiniteGroup {
    let table = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| mul(a, b)).collect();
    let labels = (0..n).map(label).collect();
    FiniteGroup::from_flat(name.into(), n, table, Some(labels))
}

/// `Z/d₁ × Z/d₂ × …`, elements in mixed radix with the first factor most significant.
pub fn abelian(orders: &[usize]) -> FiniteGroup {
    let n: usize = orders.iter().product();
    let digits = |mut x: usize| {
        let mut d = vec![0; orders.len()];
        for i in (0..orders.len()).rev() {
            d[i] = x % orders[i];
            x /= orders[i];
        }
        d
    };
    let undigits = |d: &[usize]| d.iter().zip(orders).fold(0, |acc, (&x, &o)| acc * o + x);
    let name = orders
        .iter()
        .map(|d| format!("C{d}"))
        .collect::<Vec<_>>()
        .join("x");
    from_rule(
        &name,
        n,
        |a, b| {
            let (da, db) = (digits(a), digits(b));
            let s: Vec<usize> = (0..orders.len()).map(|i| (da[i] + db[i]) % orders[i]).collect();
            undigits(&s)
        },
        |x| {
            let d = digits(x);
            if orders.len() == 1 {
                format!("{}", d[0])
            } else {
                format!("({})", d.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            }
        },
    )
}

/// Quaternion group; index `4s + u` stands for `(-1)^s · (1, i, j, k)[u]`.
pub fn q8() -> FiniteGroup {
    // unit products: (sign, unit)
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    from_rule(
        "Q8",
        8,
        |a, b| {
            let (s, u) = T[a % 4][b % 4];
            ((a / 4 + b / 4 + s) % 2) * 4 + u
        },
        |x| {
            let u = ["1", "i", "j", "k"][x % 4];
            if x < 4 {
                u.into()
            } else {
                format!("-{u}")
            }
        },
    )
}

/// Non-abelian group of order 27 and exponent 3 with centre `⟨e1⟩`: index
/// `a + 3b + 9k` stands for `e1^a e2^b c^k`, where `c e2 c⁻¹ = e1 e2`.
pub fn c27sd() -> FiniteGroup {
    let split = |x: usize| (x % 3, (x / 3) % 3, x / 9);
    from_rule(
        "C27sd",
        27,
        |x, y| {
            let (a, b, k) = split(x);
            let (a2, b2, k2) = split(y);
            (a + a2 + k * b2) % 3 + 3 * ((b + b2) % 3) + 9 * ((k + k2) % 3)
        },
        |x| {
            let (a, b, k) = split(x);
            word(&[("e1", a), ("e2", b), ("c", k)])
        },
    )
}

/// Index of `e1^a e2^b c^k` in [`c27sd`].
pub fn c27sd_element(a: usize, b: usize, k: usize) -> usize {
    a % 3 + 3 * (b % 3) + 9 * (k % 3)
}

/// Order-32 group `⟨s, t, u | s² = t² = u⁸ = 1, st = ts, sus⁻¹ = u³, tut⁻¹ = u⁵⟩`;
/// index `k + 8i + 16j` stands for `u^k s^i t^j`.
pub fn wall32() -> FiniteGroup {
    let split = |x: usize| (x % 8, (x / 8) % 2, x / 16);
    from_rule(
        "Wall32",
        32,
        |x, y| {
            let (k, i, j) = split(x);
            let (k2, i2, j2) = split(y);
            let twist = [1, 3][i] * [1, 5][j];
            (k + twist * k2) % 8 + 8 * (i ^ i2) + 16 * (j ^ j2)
        },
        |x| {
            let (k, i, j) = split(x);
            word(&[("u", k), ("s", i), ("t", j)])
        },
    )
}

/// Index of `u^k s^i t^j` in [`wall32`].
pub fn wall_element(k: usize, i: usize, j: usize) -> usize {
    k % 8 + 8 * (i % 2) + 16 * (j % 2)
}

/// `F_p[C_p] ⋊ C_p`, the wreath product `Z/p ≀ Z/p`. Index `v + p^p k` stands
/// for `(v, k)` with `v` read in base `p`, lowest coordinate first.
pub fn wreath(p: usize) -> Result<FiniteGroup> {
    let base = p.pow(p as u32);
    let n = base * p;
    if n > TABLE_LIMIT {
        return Err(Error::OrderLimitExceeded {
            size: n,
            limit: TABLE_LIMIT,
        });
    }
    let vec_of = |mut v: usize| {
        let mut out = vec![0; p];
        for c in out.iter_mut() {
            *c = v % p;
            v /= p;
        }
        out
    };
    let num_of = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
    Ok(from_rule(
        &format!("Wr_{p}"),
        n,
        |x, y| {
            let (v, k) = (vec_of(x % base), x / base);
            let (w, k2) = (vec_of(y % base), y / base);
            // (v, k)(w, k') = (v + shift^k(w), k + k')
            let s: Vec<usize> = (0..p).map(|i| (v[i] + w[(i + p - k) % p]) % p).collect();
            num_of(&s) + base * ((k + k2) % p)
        },
        |x| {
            let v = vec_of(x % base);
            let digits: String = v.iter().map(|c| c.to_string()).collect();
            format!("({digits};{})", x / base)
        },
    ))
}

/// The Klein-four elements `e1 = (1,2)(3,4)`, `e2 = (1,3)(2,4)`, `e3 = e1 e2` of [`a4`].
pub fn a4_klein(g: &FiniteGroup) -> [usize; 3] {
    let e1 = element_by_label(g, "(1,2)(3,4)").expect("A4 labels");
    let e2 = element_by_label(g, "(1,3)(2,4)").expect("A4 labels");
    [e1, e2, g.mul(e1, e2)]
}

/// The invariant twist of A4 supported on its Klein subgroup `V`:
///
/// `4F = 1⊗1 − Σ eᵢ⊗eᵢ + Σ (1⊗eᵢ + eᵢ⊗1) + (e1⊗e2 − e2⊗e1) + (e2⊗e3 − e3⊗e2) + (e3⊗e1 − e1⊗e3)`.
pub fn a4_twist(g: &Arc<FiniteGroup>) -> GTensor {
    let [e1, e2, e3] = a4_klein(g);
    let mut terms: Vec<(Vec<usize>, i64)> = vec![(vec![0, 0], 1)];
    for e in [e1, e2, e3] {
        terms.push((vec![e, e], -1));
        terms.push((vec![0, e], 1));
        terms.push((vec![e, 0], 1));
    }
    for (x, y) in [(e1, e2), (e2, e3), (e3, e1)] {
        terms.push((vec![x, y], 1));
        terms.push((vec![y, x], -1));
    }
    GTensor::from_terms(g, 2, terms.into_iter().map(|(t, c)| (t, CycNum::frac(c, 4))))
}

/// `√2 = ζ₈ + ζ₈⁷`.
pub fn sqrt2() -> CycNum {
    &CycNum::root_of_unity(8, 1) + &CycNum::root_of_unity(8, 7)
}

/// Element of the normalizer of Wall32 in `k[G]` realizing the outer class-preserving
/// automorphism: `a = ½(1 + u⁴) + (√2/4) u (1 − u² − u⁴ + u⁶)`.
pub fn wall_a(g: &Arc<FiniteGroup>) -> GTensor {
    let q = sqrt2().scale(&num_rational::BigRational::new(1.into(), 4.into()));
    let u = |k| vec![wall_element(k, 0, 0)];
    GTensor::from_terms(
        g,
        1,
        [
            (u(0), CycNum::frac(1, 2)),
            (u(4), CycNum::frac(1, 2)),
            (u(1), q.clone()),
            (u(3), -&q),
            (u(5), -&q),
            (u(7), q),
        ],
    )
}

/// The symmetric twist `F = (a ⊗ a) Δ(a⁻¹)` of Wall32, written out as `8F`
/// in the basis `uᵢⱼ = uⁱ ⊗ uʲ`.
///
/// `u₀₄` and `u₄₀` carry coefficient 2. With coefficient 1 there the table
/// would sum to 6/8, so it would not be normalized, while `δ¹(a)` is.
pub fn wall_f(g: &Arc<FiniteGroup>) -> GTensor {
    const TWO: &[(usize, usize)] = &[(0, 0), (4, 4), (0, 4), (4, 0)];
    const PLUS: &[(usize, usize)] = &[
        (1, 1), (3, 3), (5, 5), (7, 7),
        (0, 1), (0, 3), (0, 5), (0, 7), (1, 2), (1, 7), (2, 5), (3, 5), (3, 6), (6, 7),
        (1, 0), (3, 0), (5, 0), (7, 0), (2, 1), (7, 1), (5, 2), (5, 3), (6, 3), (7, 6),
    ];
    const MINUS: &[(usize, usize)] = &[
        (1, 3), (1, 4), (1, 5), (1, 6), (2, 3), (2, 7), (3, 4), (3, 7), (4, 5), (4, 7), (5, 6), (5, 7),
        (3, 1), (4, 1), (5, 1), (6, 1), (3, 2), (7, 2), (4, 3), (7, 3), (5, 4), (7, 4), (6, 5), (7, 5),
    ];
    let u = |k| wall_element(k, 0, 0);
    let terms = TWO
        .iter()
        .map(|&p| (p, 2))
        .chain(PLUS.iter().map(|&p| (p, 1)))
        .chain(MINUS.iter().map(|&p| (p, -1)))
        .map(|((i, j), c)| (vec![u(i), u(j)], CycNum::frac(c, 8)));
    GTensor::from_terms(g, 2, terms)
}

/// Names of the shipped tensors, with the group each lives on.
pub const TENSORS: &[(&str, &str)] = &[("A4_twist", "A4"), ("Wall_a", "Wall32"), ("Wall_F", "Wall32")];

/// A shipped tensor by name.
pub fn tensor_by_name(name: &str) -> Result<GTensor> {
    let group = TENSORS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, g)| *g)
        .ok_or_else(|| Error::UnknownFixture(name.into()))?;
    let g = Arc::new(by_name(group)?);
    Ok(match name {
        "A4_twist" => a4_twist(&g),
        "Wall_a" => wall_a(&g),
        _ => wall_f(&g),
    })
}

/// A group given either as a builtin name or as inline group JSON.
pub fn resolve_group(v: &Value) -> Result<FiniteGroup> {
    match v {
        Value::String(name) => by_name(name),
        Value::Object(_) => FiniteGroup::from_json(v),
        _ => Err(Error::parse("group must be a name or an object")),
    }
}

/// Tensor JSON whose `"group"` field is a builtin name or inline group JSON.
pub fn tensor_from_json(v: &Value) -> Result<GTensor> {
    let g = v
        .get("group")
        .ok_or_else(|| Error::parse("tensor needs a \"group\""))?;
    GTensor::from_json(&Arc::new(resolve_group(g)?), v)
}

fn word(parts: &[(&str, usize)]) -> String {
    let mut out = String::new();
    for &(g, e) in parts {
        match e {
            0 => {}
            1 => out.push_str(g),
            _ => out.push_str(&format!("{g}^{e}")),
        }
    }
    if out.is_empty() {
        "1".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (name, n) in [
            ("A4", 12),
            ("S3", 6),
            ("S4", 24),
            ("D8", 8),
            ("Q8", 8),
            ("C27sd", 27),
            ("Wall32", 32),
            ("Wr_3", 81),
            ("V4", 4),
            ("C8", 8),
            ("C2xC4", 8),
        ] {
            let g = by_name(name).unwrap();
            assert_eq!(g.order(), n, "{name}");
            // every fixture passes full table validation
            assert!(FiniteGroup::from_table(g.table_rows()).is_ok(), "{name}");
        }
        assert!(matches!(by_name("Wr_5"), Err(Error::OrderLimitExceeded { .. })));
        assert!(matches!(by_name("nope"), Err(Error::UnknownFixture(_))));
        assert!(matches!(by_name("C0"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn wall_relations() {
        let g = wall32();
        let (u, s, t) = (wall_element(1, 0, 0), wall_element(0, 1, 0), wall_element(0, 0, 1));
        assert_eq!(g.element_order(u), 8);
        assert_eq!(g.mul(s, t), g.mul(t, s));
        assert_eq!(g.conj(s, u), g.pow(u, 3));
        assert_eq!(g.conj(t, u), g.pow(u, 5));
        assert_eq!(g.label(wall_element(3, 1, 1)), "u^3st");
    }

    #[test]
    fn c27_is_exponent_three() {
        let g = c27sd();
        assert_eq!(g.exponent(), 3);
        assert!(!g.is_abelian());
        assert_eq!(g.center().elements(), &[0, 1, 2]);
    }

    #[test]
    fn quaternions() {
        let g = q8();
        assert_eq!(g.mul(1, 2), 3); // ij = k
        assert_eq!(g.mul(2, 1), 7); // ji = -k
        assert_eq!(g.center().order(), 2);
    }
}
