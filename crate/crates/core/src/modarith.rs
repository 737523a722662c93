//! Modular arithmetic for the family congruences. Moduli need not be prime.

/// Least nonnegative residue of `x` mod `n`.
#[inline]
pub fn md(x: i64, n: i64) -> i64 {
    debug_assert!(n > 0);
    x.rem_euclid(n)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `r^k mod n` for `k ≥ 0`.
pub fn pow_mod(r: i64, k: u64, n: i64) -> i64 {
    let mut acc = md(1, n);
    let mut base = md(r, n);
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = md(acc * base, n);
        }
        base = md(base * base, n);
        e >>= 1;
    }
    acc
}

/// Inverse of `r` mod `n`, if it exists.
pub fn inv_mod(r: i64, n: i64) -> Option<i64> {
    let (mut old_r, mut rr) = (md(r, n), n);
    let (mut old_s, mut s) = (1i64, 0i64);
    while rr != 0 {
        let q = old_r / rr;
        (old_r, rr) = (rr, old_r - q * rr);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1 || n == 1).then(|| md(old_s, n))
}

/// `r^k mod n` for any integer `k`; `None` if `k < 0` and `r` is not a unit.
pub fn pow_signed(r: i64, k: i64, n: i64) -> Option<i64> {
    if k >= 0 {
        Some(pow_mod(r, k as u64, n))
    } else {
        inv_mod(r, n).map(|ri| pow_mod(ri, k.unsigned_abs(), n))
    }
}

/// `∑_{l=1}^{k} r^l mod n`, accumulated term by term.
pub fn geom_sum(r: i64, k: u64, n: i64) -> i64 {
    let r = md(r, n);
    let mut term = md(1, n);
    let mut acc = 0;
    for _ in 0..k {
        term = md(term * r, n);
        acc = md(acc + term, n);
    }
    acc
}

/// `∑_{l=0}^{k-1} r^l mod n`.
pub fn geom_sum0(r: i64, k: u64, n: i64) -> i64 {
    let r = md(r, n);
    let mut term = md(1, n);
    let mut acc = 0;
    for _ in 0..k {
        acc = md(acc + term, n);
        term = md(term * r, n);
    }
    acc
}

/// Multiplicative order of `r` mod `n`; `None` unless `r` is a unit.
pub fn mult_order(r: i64, n: i64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if gcd(r, n) != 1 {
        return None;
    }
    let r = md(r, n);
    let mut x = r;
    let mut k = 1;
    while x != 1 {
        x = md(x * r, n);
        k += 1;
    }
    Some(k)
}

pub fn is_unit(r: i64, n: i64) -> bool {
    gcd(r, n) == 1
}

/// Checks a clause of the form `f(i) ≡ 0 ⇔ i ≡ 0 (mod period)` over positive `i`:
/// `f` vanishes at `period` and at no smaller positive index.
pub fn vanishes_exactly_at(period: u64, mut f: impl FnMut(u64) -> bool) -> bool {
    period >= 1 && f(period) && (1..period).all(|i| !f(i))
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}
