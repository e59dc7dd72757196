//! Constructors for the group families used throughout the crate.

use super::FiniteGroup;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fplin::is_prime;
use std::collections::BTreeMap;

fn checked_order(order: u64, caps: &Caps) -> Result<usize> {
    if order > caps.order {
        return Err(Error::Cap { cap: "order", limit: caps.order as u128, needed: order as u128 });
    }
    Ok(order as usize)
}

/// The one-element group.
pub fn trivial(caps: &Caps) -> Result<FiniteGroup> {
    FiniteGroup::from_table_with("C1".into(), 1, vec![0], Some(vec![]), BTreeMap::new(), caps)
}

/// Cyclic group of order `n`, elements acting as residues mod `n`.
pub fn cyclic(n: u64, caps: &Caps) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::domain("cyclic group order must be positive"));
    }
    let n = checked_order(n, caps)?;
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = ((a + b) % n) as u32;
        }
    }
    let gens = if n == 1 { vec![] } else { vec![1] };
    FiniteGroup::from_table_with(format!("C{n}"), n, table, Some(gens), BTreeMap::new(), caps)
}

/// Elementary abelian group of order p^r: vectors over F_p under addition.
/// Element index is the base-p encoding, digit i holding coordinate i.
pub fn elementary_abelian(p: u64, r: u32, caps: &Caps) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if r == 0 {
        return Err(Error::domain("rank must be at least 1"));
    }
    let mut order: u64 = 1;
    for _ in 0..r {
        order = order.checked_mul(p).ok_or(Error::Cap {
            cap: "order",
            limit: caps.order as u128,
            needed: u128::MAX,
        })?;
        if order > caps.order {
            return Err(Error::Cap {
                cap: "order",
                limit: caps.order as u128,
                needed: (p as u128).pow(r),
            });
        }
    }
    let n = order as usize;
    let pu = p as usize;
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            // Digit-wise addition mod p.
            let (mut x, mut y, mut out, mut place) = (a, b, 0usize, 1usize);
            for _ in 0..r {
                out += ((x % pu) + (y % pu)) % pu * place;
                x /= pu;
                y /= pu;
                place *= pu;
            }
            table[a * n + b] = out as u32;
        }
    }
    let gens: Vec<u32> = (0..r).map(|i| (p as usize).pow(i) as u32).collect();
    FiniteGroup::from_table_with(format!("E({p}^{r})"), n, table, Some(gens), BTreeMap::new(), caps)
}

/// Dihedral group of the given (even) order 2n. Index k < n is the rotation
/// r^k; index n + k is the reflection s·r^k.
pub fn dihedral(order: u64, caps: &Caps) -> Result<FiniteGroup> {
    if order < 2 || order % 2 != 0 {
        return Err(Error::domain("dihedral order must be even and at least 2"));
    }
    let n2 = checked_order(order, caps)?;
    let n = n2 / 2;
    let idx = |eps: usize, k: usize| (eps * n + k) as u32;
    let mut table = vec![0u32; n2 * n2];
    for a in 0..n2 {
        for b in 0..n2 {
            let (ea, ka) = (a / n, a % n);
            let (eb, kb) = (b / n, b % n);
            // s r^a s = r^{-a}; reflections flip the sign of the rotation
            // they pass over.
            let v = match (ea, eb) {
                (0, 0) => idx(0, (ka + kb) % n),
                (0, 1) => idx(1, (n + kb - ka) % n),
                (1, 0) => idx(1, (ka + kb) % n),
                _ => idx(0, (n + kb - ka) % n),
            };
            table[a * n2 + b] = v;
        }
    }
    let gens = if n >= 2 { vec![1, n as u32] } else { vec![n as u32] };
    let mut marked = BTreeMap::new();
    marked.insert("rotations".to_string(), (0..n as u32).collect());
    FiniteGroup::from_table_with(format!("D{n2}"), n2, table, Some(gens), marked, caps)
}

/// Direct product, elements ordered as (a, b) -> a * |H| + b.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup, caps: &Caps) -> Result<FiniteGroup> {
    let order = (g.order() as u64)
        .checked_mul(h.order() as u64)
        .ok_or(Error::Cap { cap: "order", limit: caps.order as u128, needed: u128::MAX })?;
    let n = checked_order(order, caps)?;
    let nh = h.order();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        let (ag, ah) = ((a / nh) as u32, (a % nh) as u32);
        for b in 0..n {
            let (bg, bh) = ((b / nh) as u32, (b % nh) as u32);
            table[a * n + b] = g.mul(ag, bg) * nh as u32 + h.mul(ah, bh);
        }
    }
    let mut gens: Vec<u32> = g.generators().iter().map(|&x| x * nh as u32).collect();
    gens.extend(h.generators().iter().map(|&y| y));
    let mut marked = BTreeMap::new();
    for name in g.marked_names() {
        let sub = g.marked_subgroup(name).expect("listed");
        marked.insert(
            format!("left.{name}"),
            sub.elements().iter().map(|&x| x * nh as u32).collect(),
        );
    }
    for name in h.marked_names() {
        let sub = h.marked_subgroup(name).expect("listed");
        marked.insert(format!("right.{name}"), sub.elements().to_vec());
    }
    let label = format!("{} x {}", g.label(), h.label());
    FiniteGroup::from_table_with(label, n, table, Some(gens), marked, caps)
}

const fn pairs(d: u32) -> u32 {
    d * (d.saturating_sub(1)) / 2
}

/// The free object on `d` generators among finite groups that are central
/// extensions of an elementary abelian group by an elementary abelian
/// group, everything of exponent dividing p (p odd) or 4 (p = 2), with
/// commutators and p-th powers central. Elements are exponent tuples
/// (a_1..a_d, b_1..b_d, c_{ik} for k < i), all mod p, with index given by
/// the mixed-radix base-p encoding in that digit order. The product adds
/// a-parts mod p, adds b-parts plus the carry of the a-addition, and adds
/// c-parts plus the bilinear cross term a_i * a'_k.
pub fn free_cmea(d: u32, p: u64, caps: &Caps) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if d == 0 {
        return Err(Error::domain("need at least one generator"));
    }
    let m = 2 * d + pairs(d);
    let mut order: u64 = 1;
    for _ in 0..m {
        order = order.checked_mul(p).ok_or(Error::Cap {
            cap: "order",
            limit: caps.order as u128,
            needed: u128::MAX,
        })?;
        if order > caps.order {
            return Err(Error::Cap {
                cap: "order",
                limit: caps.order as u128,
                needed: (p as u128).pow(m),
            });
        }
    }
    let n = order as usize;
    let pu = p as usize;
    let du = d as usize;

    let decode = |mut x: usize| -> Vec<usize> {
        let mut digits = vec![0usize; m as usize];
        for dgt in digits.iter_mut() {
            *dgt = x % pu;
            x /= pu;
        }
        digits
    };
    let encode = |digits: &[usize]| -> usize {
        let mut x = 0;
        for &dgt in digits.iter().rev() {
            x = x * pu + dgt;
        }
        x
    };
    // c_{ik} with k < i sits at offset 2d + (i choose 2) + k.
    let cpos = |i: usize, k: usize| 2 * du + i * (i - 1) / 2 + k;

    let mut table = vec![0u32; n * n];
    let mut out = vec![0usize; m as usize];
    for x in 0..n {
        let xd = decode(x);
        for y in 0..n {
            let yd = decode(y);
            for i in 0..du {
                let s = xd[i] + yd[i];
                out[i] = s % pu;
                // b_i picks up the carry from a_i + a'_i.
                out[du + i] = (xd[du + i] + yd[du + i] + s / pu) % pu;
            }
            for i in 1..du {
                for k in 0..i {
                    let cp = cpos(i, k);
                    out[cp] = (xd[cp] + yd[cp] + xd[i] * yd[k]) % pu;
                }
            }
            table[x * n + y] = encode(&out) as u32;
        }
    }
    let gens: Vec<u32> = (0..du).map(|i| pu.pow(i as u32) as u32).collect();
    // The a-part-zero elements form the subgroup generated by all p-th
    // powers and commutators.
    let frat: Vec<u32> = (0..n as u32)
        .filter(|&x| {
            let dgt = decode(x as usize);
            dgt[..du].iter().all(|&v| v == 0)
        })
        .collect();
    let mut marked = BTreeMap::new();
    marked.insert("frattini".to_string(), frat);
    FiniteGroup::from_table_with(format!("FreeCMEA({d},{p})"), n, table, Some(gens), marked, caps)
}

/// Finite lamplighter quotient: F_p wr C_{p^k} restricted to p^k lamps,
/// i.e. (F_p)^{p^k} acted on by the cyclic shift of order p^k. Elements
/// are pairs (v, s) with index vec_index(v) * p^k + s; the product is
/// (v, s)(v', s') = (v + sigma^s v', s + s').
pub fn lamplighter_quotient(p: u64, k: u32, caps: &Caps) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::domain("need at least p lamps (k >= 1)"));
    }
    let m_u64 = p
        .checked_pow(k)
        .ok_or(Error::Cap { cap: "order", limit: caps.order as u128, needed: u128::MAX })?;
    // order = p^m * m; the base alone needs p^(p^k).
    let mut order: u64 = m_u64;
    for _ in 0..m_u64 {
        order = order.checked_mul(p).ok_or(Error::Cap {
            cap: "order",
            limit: caps.order as u128,
            needed: u128::MAX,
        })?;
        if order > caps.order {
            return Err(Error::Cap {
                cap: "order",
                limit: caps.order as u128,
                needed: (p as u128).pow(m_u64 as u32).saturating_mul(m_u64 as u128),
            });
        }
    }
    let n = checked_order(order, caps)?;
    let m = m_u64 as usize;
    let pu = p as usize;

    let decode = |mut x: usize| -> Vec<usize> {
        let mut v = vec![0usize; m];
        for dgt in v.iter_mut() {
            *dgt = x % pu;
            x /= pu;
        }
        v
    };
    let encode = |v: &[usize]| -> usize {
        let mut x = 0;
        for &dgt in v.iter().rev() {
            x = x * pu + dgt;
        }
        x
    };

    let mut table = vec![0u32; n * n];
    for x in 0..n {
        let (vx, sx) = (decode(x / m), x % m);
        for y in 0..n {
            let (vy, sy) = (decode(y / m), y % m);
            // sigma^s shifts lamp j to lamp j + s.
            let mut v = vec![0usize; m];
            for j in 0..m {
                v[(j + sx) % m] = (vx[(j + sx) % m] + vy[j]) % pu;
            }
            table[x * n + y] = (encode(&v) * m + (sx + sy) % m) as u32;
        }
    }
    // Generators: one lamp at position 0, and the shift.
    let lamp = m as u32;
    let shift = 1u32;
    let mut marked = BTreeMap::new();
    marked.insert("base".to_string(), (0..n as u32).filter(|&x| x as usize % m == 0).collect());
    marked.insert("top".to_string(), (0..m as u32).collect());
    FiniteGroup::from_table_with(
        format!("Lamplighter({p},{k})"),
        n,
        table,
        Some(vec![lamp, shift]),
        marked,
        caps,
    )
}

/// Shorthand used by tests and the sweep code.
pub fn klein_four(caps: &Caps) -> Result<FiniteGroup> {
    elementary_abelian(2, 2, caps)
}

/// Symmetric group on three letters, as a dihedral group of order 6.
pub fn sym3(caps: &Caps) -> Result<FiniteGroup> {
    Ok(dihedral(6, caps)?.relabel("S3"))
}
