//! Subsets of a finite point set `{0..n-1}` packed into a 64-bit mask.

/// A subset of `{0..n-1}`, bit `p` set iff point `p` is a member.
pub type Mask = u64;

/// Hard cap imposed by the mask width.
pub const MAX_POINTS: u32 = 64;

#[inline]
pub fn bit(p: u32) -> Mask {
    debug_assert!(p < MAX_POINTS);
    1u64 << p
}

/// The set `{0..n-1}` itself.
#[inline]
pub fn full_mask(n: u32) -> Mask {
    debug_assert!(n <= MAX_POINTS);
    if n == MAX_POINTS {
        !0
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn contains(m: Mask, p: u32) -> bool {
    p < MAX_POINTS && m & bit(p) != 0
}

#[inline]
pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

/// Points of `m` in ascending order.
pub fn iter_points(m: Mask) -> impl Iterator<Item = u32> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let p = rest.trailing_zeros();
            rest &= rest - 1;
            Some(p)
        }
    })
}

pub fn mask_from<I: IntoIterator<Item = u32>>(points: I) -> Mask {
    points.into_iter().fold(0, |m, p| m | bit(p))
}

pub fn to_sorted_vec(m: Mask) -> Vec<u32> {
    iter_points(m).collect()
}

/// Re-indexes `m ∩ within` through the ascending enumeration of `within`.
///
/// Bit `i` of the result is set iff the `i`-th smallest point of `within`
/// belongs to `m`. Used when a sub-spectrum becomes a spectrum of its own.
pub fn compress_into(m: Mask, within: Mask) -> Mask {
    let mut out = 0;
    for (i, p) in iter_points(within).enumerate() {
        if contains(m, p) {
            out |= 1u64 << i;
        }
    }
    out
}

/// All subsets of `universe`, ascending as integers.
pub fn subsets(universe: Mask) -> Vec<Mask> {
    let mut out = Vec::with_capacity(1usize << universe.count_ones().min(32));
    let mut s: Mask = 0;
    loop {
        out.push(s);
        if s == universe {
            return out;
        }
        s = s.wrapping_sub(universe) & universe;
    }
}

/// Renders a mask as `{p0,p1,...}` for error messages and reports.
pub fn render(m: Mask) -> String {
    let parts: Vec<String> = iter_points(m).map(|p| p.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}
