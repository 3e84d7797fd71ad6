//! Fibonacci and Lucas polynomials `u_n = x u_{n-1} - u_{n-2}` with initial
//! values `(0, 1)` and `(2, x)`.

use crate::arith::Poly;

/// A sequence of polynomials indexed from zero.
pub type PolySeq = Vec<Poly>;

/// Default number of terms inspected by [`detect_period`] callers.
pub const PERIOD_HORIZON: usize = 64;

fn recurrence(len: usize, u0: Poly, u1: Poly, arg: &Poly) -> PolySeq {
    let mut out = Vec::with_capacity(len.max(2));
    out.push(u0);
    out.push(u1);
    for n in 2..len {
        let next = &(arg * &out[n - 1]) - &out[n - 2];
        out.push(next);
    }
    out.truncate(len);
    out
}

/// `F_0(arg), ..., F_{len-1}(arg)`.
pub fn fib_seq(len: usize, arg: &Poly) -> PolySeq {
    recurrence(len, Poly::zero(), Poly::one(), arg)
}

/// `L_0(arg), ..., L_{len-1}(arg)`.
pub fn lucas_seq(len: usize, arg: &Poly) -> PolySeq {
    recurrence(len, Poly::constant(2), arg.clone(), arg)
}

pub fn fib(n: usize, arg: &Poly) -> Poly {
    fib_seq(n + 1, arg).pop().unwrap()
}

pub fn lucas(n: usize, arg: &Poly) -> Poly {
    lucas_seq(n + 1, arg).pop().unwrap()
}

/// `F_n(L_k(c))`.
pub fn fib_of_lucas(n: usize, k: usize, c: &Poly) -> Poly {
    fib(n, &lucas(k, c))
}

/// Least `p` with `seq[i + p] == seq[i]` for every index in range, searched
/// over candidates with `3p <= seq.len()`.
pub fn detect_period(seq: &[Poly]) -> Option<usize> {
    (1..=seq.len() / 3).find(|&p| (0..seq.len() - p).all(|i| seq[i + p] == seq[i]))
}
