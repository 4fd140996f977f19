//! Polynomials in the two ladder symbols `a` (lower) and `a^dag` (raise).
//!
//! Words are kept in the order written; [`LadderPolynomial::normal_order`] rewrites them with
//! `a a^dag = a^dag a + 1` and [`LadderPolynomial::weyl_order`] symmetrizes every word over the
//! distinct permutations of its letters. [`LadderPolynomial::to_matrix`] realizes a polynomial
//! on a truncated number basis, applying truncation after every letter.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::fock::FockMatrix;
use crate::scalar::Real;
use crate::spectrum::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ladder {
    Raise,
    Lower,
}

impl Ladder {
    pub fn adjoint(self) -> Self {
        match self {
            Ladder::Raise => Ladder::Lower,
            Ladder::Lower => Ladder::Raise,
        }
    }
}

/// A product of ladder letters, leftmost letter acting last. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LadderWord(Vec<Ladder>);

impl LadderWord {
    pub fn new(letters: Vec<Ladder>) -> Self {
        Self(letters)
    }

    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[Ladder] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn raises(&self) -> usize {
        self.0.iter().filter(|&&l| l == Ladder::Raise).count()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Self(letters)
    }

    /// Reverse and swap letters.
    pub fn adjoint(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    pub fn is_normal_ordered(&self) -> bool {
        !self
            .0
            .windows(2)
            .any(|w| w[0] == Ladder::Lower && w[1] == Ladder::Raise)
    }

    /// All distinct arrangements of this word's letters, in ascending word order.
    pub fn distinct_permutations(&self) -> Vec<LadderWord> {
        let len = self.len();
        let raises = self.raises();
        let mut out = Vec::new();
        let mut letters = Vec::with_capacity(len);
        permute(len, raises, len - raises, &mut letters, &mut out);
        out
    }
}

fn permute(
    len: usize,
    raises: usize,
    lowers: usize,
    prefix: &mut Vec<Ladder>,
    out: &mut Vec<LadderWord>,
) {
    if prefix.len() == len {
        out.push(LadderWord(prefix.clone()));
        return;
    }
    if raises > 0 {
        prefix.push(Ladder::Raise);
        permute(len, raises - 1, lowers, prefix, out);
        prefix.pop();
    }
    if lowers > 0 {
        prefix.push(Ladder::Lower);
        permute(len, raises, lowers - 1, prefix, out);
        prefix.pop();
    }
}

impl Ord for LadderWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for LadderWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LadderWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for l in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(match l {
                Ladder::Raise => "a+",
                Ladder::Lower => "a",
            })?;
        }
        Ok(())
    }
}

/// Finite complex-weighted sum of ladder words. Exactly-zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LadderPolynomial<T> {
    terms: BTreeMap<LadderWord, Complex<T>>,
}

impl<T: Real> LadderPolynomial<T> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::term(LadderWord::identity(), c)
    }

    pub fn term(word: LadderWord, c: Complex<T>) -> Self {
        let mut p = Self::zero();
        p.add_term(word, c);
        p
    }

    pub fn word(letters: &[Ladder]) -> Self {
        Self::term(
            LadderWord::new(letters.to_vec()),
            Complex::new(T::one(), T::zero()),
        )
    }

    pub fn lower() -> Self {
        Self::word(&[Ladder::Lower])
    }

    pub fn raise() -> Self {
        Self::word(&[Ladder::Raise])
    }

    pub fn add_term(&mut self, word: LadderWord, c: Complex<T>) {
        use std::collections::btree_map::Entry;
        let is_zero = |v: &Complex<T>| v.re == T::zero() && v.im == T::zero();
        match self.terms.entry(word) {
            Entry::Vacant(slot) => {
                if !is_zero(&c) {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if is_zero(slot.get()) {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LadderWord, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &LadderWord) -> Complex<T> {
        self.terms
            .get(word)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(LadderWord::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn scale_real(&self, c: T) -> Self {
        self.scale(Complex::new(c, T::zero()))
    }

    /// Formal adjoint: reverse each word, swap letters, conjugate coefficients.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.adjoint(), v.conj());
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Replace each word by the uniform average of all distinct permutations of its letters.
    pub fn weyl_order(&self) -> Self {
        // total weight per (raises, lowers) class
        let mut classes: BTreeMap<(usize, usize), (LadderWord, Complex<T>)> = BTreeMap::new();
        for (w, v) in &self.terms {
            let key = (w.raises(), w.len() - w.raises());
            classes
                .entry(key)
                .and_modify(|(_, acc)| *acc += v)
                .or_insert_with(|| (w.clone(), *v));
        }
        let mut out = Self::zero();
        for (_, (representative, total)) in classes {
            let perms = representative.distinct_permutations();
            let share = total / T::from_index(perms.len());
            for p in perms {
                out.add_term(p, share);
            }
        }
        out
    }

    /// Rewrite every word with all raise letters to the left, using `a a^dag = a^dag a + 1`.
    pub fn normal_order(&self) -> Self {
        let mut out = Self::zero();
        let mut stack: Vec<(Vec<Ladder>, Complex<T>)> =
            self.terms.iter().map(|(w, v)| (w.0.clone(), *v)).collect();
        while let Some((letters, c)) = stack.pop() {
            let swap = letters
                .windows(2)
                .position(|w| w[0] == Ladder::Lower && w[1] == Ladder::Raise);
            match swap {
                None => out.add_term(LadderWord(letters), c),
                Some(i) => {
                    let mut swapped = letters.clone();
                    swapped.swap(i, i + 1);
                    let mut contracted = letters;
                    contracted.drain(i..i + 2);
                    stack.push((swapped, c));
                    stack.push((contracted, c));
                }
            }
        }
        out
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(LadderWord::is_normal_ordered)
    }

    /// Matrix on the number basis `|0>, ..., |dim-1>`, each letter truncated as it acts.
    ///
    /// Entries do not depend on term order, and realizing the adjoint gives exactly the
    /// conjugate transpose: contributions to one entry are summed sign-symmetrically.
    pub fn to_matrix(&self, dim: usize) -> FockMatrix<T> {
        let mut parts: BTreeMap<(usize, usize), (Vec<T>, Vec<T>)> = BTreeMap::new();
        for (w, c) in &self.terms {
            for col in 0..dim {
                if let Some((row, amp)) = apply_word::<T>(w, col, dim) {
                    let entry = parts.entry((row, col)).or_default();
                    entry.0.push(c.re * amp);
                    entry.1.push(c.im * amp);
                }
            }
        }
        let mut m = FockMatrix::zeros(dim);
        for ((row, col), (mut re, mut im)) in parts {
            m.set(
                row,
                col,
                Complex::new(symmetric_sum(&mut re), symmetric_sum(&mut im)),
            );
        }
        m
    }

    /// Deterministic plain-text dump of the normal-ordered form, one term per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (w, c) in &self.normal_order().terms {
            s.push_str(&format!("({:+.16e}{:+.16e}i) {}\n", c.re, c.im, w));
        }
        s
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_coefficient_diff(&self, other: &Self) -> T {
        (self - other)
            .terms
            .values()
            .fold(T::zero(), |m, v| m.max(v.norm()))
    }
}

/// Action of a word on `|n>` with truncation: returns the image basis index and amplitude.
///
/// The amplitude is the square root of an exact integer product, so a word and its adjoint
/// give bit-identical transposed entries.
fn apply_word<T: Real>(word: &LadderWord, n: usize, dim: usize) -> Option<(usize, T)> {
    let mut idx = n;
    let mut product: u128 = 1;
    for letter in word.letters().iter().rev() {
        match letter {
            Ladder::Lower => {
                if idx == 0 {
                    return None;
                }
                product *= idx as u128;
                idx -= 1;
            }
            Ladder::Raise => {
                if idx + 1 >= dim {
                    return None;
                }
                idx += 1;
                product *= idx as u128;
            }
        }
    }
    let amp = T::from_u128(product).unwrap_or_else(T::infinity).sqrt();
    Some((idx, amp))
}

/// Sum that depends only on the multiset of values and flips sign exactly under negation:
/// equal magnitudes are netted first, then groups are added in increasing magnitude.
pub(crate) fn symmetric_sum<T: Real>(values: &mut [T]) -> T {
    values.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap_or(Ordering::Equal));
    let mut total = T::zero();
    let mut i = 0;
    while i < values.len() {
        let mag = values[i].abs();
        let mut net: i64 = 0;
        while i < values.len() && values[i].abs() == mag {
            net += if values[i] < T::zero() { -1 } else { 1 };
            i += 1;
        }
        total += T::from_i64(net).unwrap_or_else(T::zero) * mag;
    }
    total
}

impl<T: Real> Add for &LadderPolynomial<T> {
    type Output = LadderPolynomial<T>;

    fn add(self, rhs: Self) -> LadderPolynomial<T> {
        let mut out = self.clone();
        for (w, v) in &rhs.terms {
            out.add_term(w.clone(), *v);
        }
        out
    }
}

impl<T: Real> Sub for &LadderPolynomial<T> {
    type Output = LadderPolynomial<T>;

    fn sub(self, rhs: Self) -> LadderPolynomial<T> {
        let mut out = self.clone();
        for (w, v) in &rhs.terms {
            out.add_term(w.clone(), -v);
        }
        out
    }
}

impl<T: Real> Neg for &LadderPolynomial<T> {
    type Output = LadderPolynomial<T>;

    fn neg(self) -> LadderPolynomial<T> {
        self.scale_real(-T::one())
    }
}

impl<T: Real> Mul for &LadderPolynomial<T> {
    type Output = LadderPolynomial<T>;

    fn mul(self, rhs: Self) -> LadderPolynomial<T> {
        let mut out = LadderPolynomial::zero();
        for (wl, vl) in &self.terms {
            for (wr, vr) in &rhs.terms {
                out.add_term(wl.concat(wr), vl * vr);
            }
        }
        out
    }
}

impl<T: Real> fmt::Display for LadderPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// `A` split into its `lambda`-independent part and the coefficient of `lambda`:
/// `A = sqrt(beta) a - lambda/(4 sqrt(beta)) W[(a + a^dag)^2 a^dag]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrder<T> {
    pub order0: LadderPolynomial<T>,
    pub order1: LadderPolynomial<T>,
}

impl<T: Real> FirstOrder<T> {
    pub fn at(&self, lambda: T) -> LadderPolynomial<T> {
        &self.order0 + &self.order1.scale_real(lambda)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            order0: self.order0.adjoint(),
            order1: self.order1.adjoint(),
        }
    }
}

fn quadrature_sum<T: Real>() -> LadderPolynomial<T> {
    &LadderPolynomial::lower() + &LadderPolynomial::raise()
}

fn ladder_parts<T: Real>(params: &ModelParams<T>, tail: Ladder, head: Ladder) -> FirstOrder<T> {
    let s = quadrature_sum::<T>();
    let cubic = &(&s * &s) * &LadderPolynomial::word(&[tail]);
    let root = params.beta().sqrt();
    FirstOrder {
        order0: LadderPolynomial::word(&[head]).scale_real(root),
        order1: cubic
            .weyl_order()
            .scale_real(-T::one() / (T::lit(4.0) * root)),
    }
}

/// First-order parts of `A`.
pub fn a_parts<T: Real>(params: &ModelParams<T>) -> FirstOrder<T> {
    ladder_parts(params, Ladder::Raise, Ladder::Lower)
}

/// First-order parts of `A^dag = sqrt(beta) a^dag - lambda/(4 sqrt(beta)) W[(a + a^dag)^2 a]`,
/// built directly from its own expression rather than as the adjoint of `A`.
pub fn a_dagger_parts<T: Real>(params: &ModelParams<T>) -> FirstOrder<T> {
    ladder_parts(params, Ladder::Lower, Ladder::Raise)
}

/// Weyl-ordered `A` to first order in `lambda`.
pub fn build_a<T: Real>(params: &ModelParams<T>) -> LadderPolynomial<T> {
    a_parts(params).at(params.lambda())
}

pub fn build_a_dagger<T: Real>(params: &ModelParams<T>) -> LadderPolynomial<T> {
    a_dagger_parts(params).at(params.lambda())
}

/// `H = A^dag A + beta/2`, truncated at first order in `lambda` and normal ordered.
pub fn hamiltonian_fock<T: Real>(params: &ModelParams<T>) -> LadderPolynomial<T> {
    let a = a_parts(params);
    let ad = a_dagger_parts(params);
    let order0 = &ad.order0 * &a.order0;
    let order1 = &(&ad.order0 * &a.order1) + &(&ad.order1 * &a.order0);
    let zero_point =
        LadderPolynomial::constant(Complex::new(params.beta() / T::lit(2.0), T::zero()));
    (&(&order0 + &order1.scale_real(params.lambda())) + &zero_point).normal_order()
}

/// `x = (a + a^dag)/sqrt(2 beta)`, `p = -i sqrt(beta/2) (a - a^dag)`.
pub fn phase_space_ops<T: Real>(
    params: &ModelParams<T>,
) -> (LadderPolynomial<T>, LadderPolynomial<T>) {
    let two = T::lit(2.0);
    let x = quadrature_sum::<T>().scale_real(T::one() / (two * params.beta()).sqrt());
    let diff = &LadderPolynomial::lower() - &LadderPolynomial::raise();
    let p = diff.scale(Complex::new(T::zero(), -(params.beta() / two).sqrt()));
    (x, p)
}

pub fn number_op<T: Real>() -> LadderPolynomial<T> {
    LadderPolynomial::word(&[Ladder::Raise, Ladder::Lower])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_sum_ignores_order_and_sign() {
        let mut a = vec![0.1, 1e16, -0.3, 1.0, -1e16, 0.1];
        let mut b: Vec<f64> = a.iter().rev().map(|x| -x).collect();
        assert_eq!(symmetric_sum(&mut a), -symmetric_sum(&mut b));
        assert_eq!(symmetric_sum::<f64>(&mut []), 0.0);
    }
    use num_complex::Complex64;
    use Ladder::{Lower as L, Raise as R};

    type P = LadderPolynomial<f64>;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn w(letters: &[Ladder]) -> LadderWord {
        LadderWord::new(letters.to_vec())
    }

    fn params(beta: f64, lambda: f64) -> ModelParams<f64> {
        ModelParams::new(beta, lambda).unwrap()
    }

    #[test]
    fn weyl_two_letters() {
        let sym = P::word(&[L, R]).weyl_order();
        assert_eq!(sym.len(), 2);
        assert_eq!(sym.coefficient(&w(&[L, R])), c(0.5));
        assert_eq!(sym.coefficient(&w(&[R, L])), c(0.5));
        assert_eq!(P::word(&[L, L]).weyl_order(), P::word(&[L, L]));
    }

    #[test]
    fn weyl_three_letters() {
        let sym = P::word(&[R, L, L]).weyl_order();
        assert_eq!(sym.len(), 3);
        for word in [[R, L, L], [L, R, L], [L, L, R]] {
            assert!((sym.coefficient(&w(&word)) - c(1.0 / 3.0)).norm() < 1e-16);
        }
    }

    #[test]
    fn normal_order_examples() {
        let n = P::word(&[L, R]).normal_order();
        assert_eq!(n, &P::word(&[R, L]) + &P::constant(c(1.0)));

        let n = P::word(&[L, R, L]).normal_order();
        assert_eq!(n, &P::word(&[R, L, L]) + &P::word(&[L]));

        let n = P::word(&[L, L, R, R]).normal_order();
        let expected =
            &(&P::word(&[R, R, L, L]) + &P::word(&[R, L]).scale_real(4.0)) + &P::constant(c(2.0));
        assert_eq!(n, expected);
        let d = 12;
        let diff = P::word(&[L, L, R, R])
            .to_matrix(d)
            .max_abs_diff_block(&expected.to_matrix(d), d - 4)
            .unwrap();
        assert!(diff < 1e-12);
    }

    #[test]
    fn matrix_realization() {
        let m = P::lower().to_matrix(3);
        for i in 0..3 {
            for j in 0..3 {
                let expected = match (i, j) {
                    (0, 1) => 1.0,
                    (1, 2) => 2.0_f64.sqrt(),
                    _ => 0.0,
                };
                assert!((m.get(i, j) - c(expected)).norm() < 1e-15);
            }
        }
        let n = number_op::<f64>().to_matrix(4);
        for i in 0..4 {
            assert!((n.get(i, i) - c(i as f64)).norm() < 1e-15);
        }
        assert!(n.max_abs_diff_block(&FockMatrix::number(4), 4).unwrap() < 1e-15);
    }

    #[test]
    fn a_at_zero_lambda() {
        let a = build_a(&params(2.0, 0.0));
        assert_eq!(a, P::lower().scale_real(2.0_f64.sqrt()));
    }

    #[test]
    fn a_dagger_is_adjoint_of_a() {
        for (beta, lambda) in [(1.0, 0.1), (2.0, -0.2), (0.7, 0.05)] {
            let p = params(beta, lambda);
            let diff = build_a(&p)
                .adjoint()
                .max_coefficient_diff(&build_a_dagger(&p));
            assert!(diff < 1e-15);
        }
    }

    #[test]
    fn single_raise_coefficient_of_a() {
        // -(lambda/4) (a + a^dag)^2 a^dag, single-raise words come from the a a a^dag term
        let p = params(1.0, 0.1);
        let a = build_a(&p);
        for word in [[R, L, L], [L, R, L], [L, L, R]] {
            assert!((a.coefficient(&w(&word)) - c(-0.1 / 4.0 / 3.0)).norm() < 1e-16);
        }
        // matrix cross-check of the whole lambda part
        let d = 16;
        let s = &P::lower() + &P::raise();
        let cubic = &(&s * &s) * &P::raise();
        let perms: Vec<P> = cubic
            .terms()
            .map(|(word, coef)| {
                let all = word.distinct_permutations();
                let share = coef / all.len() as f64;
                all.into_iter()
                    .fold(P::zero(), |acc, perm| &acc + &P::term(perm, share))
            })
            .collect();
        let manual = perms.iter().fold(P::zero(), |acc, q| &acc + q);
        let expected = &P::lower() + &manual.scale_real(-0.1 / 4.0);
        let diff = a
            .to_matrix(d)
            .max_abs_diff_block(&expected.to_matrix(d), d)
            .unwrap();
        assert!(diff < 1e-14);
    }

    #[test]
    fn hamiltonian_harmonic_limit() {
        let p = params(1.5, 0.0);
        let h = hamiltonian_fock(&p);
        let expected = &number_op::<f64>().scale_real(1.5) + &P::constant(c(0.75));
        assert!(h.max_coefficient_diff(&expected) < 1e-15);
    }

    #[test]
    fn hamiltonian_is_normal_ordered_and_self_adjoint() {
        let h = hamiltonian_fock(&params(1.0, 0.1));
        assert!(h.is_normal_ordered());
        assert!(h.max_coefficient_diff(&h.adjoint()) < 1e-15);
        assert!(h.degree() == 4);
    }

    #[test]
    fn hamiltonian_diagonal_n_dependence() {
        // n-dependent part of the diagonal is beta n - (lambda/2) n^2
        for (beta, lambda) in [(1.0, 0.1), (2.0, -0.2)] {
            let p = params(beta, lambda);
            let d = 32;
            let m = hamiltonian_fock(&p).to_matrix(d);
            let h00 = m.get(0, 0).re;
            for n in 0..=d - 5 {
                let expected = beta * n as f64 - lambda / 2.0 * (n * n) as f64;
                assert!((m.get(n, n).re - h00 - expected).abs() < 1e-12);
                assert!(m.get(n, n).im.abs() < 1e-15);
            }
            assert!((h00 - beta / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn phase_space_examples() {
        let p = params(2.0, 0.0);
        let (x, pp) = phase_space_ops(&p);
        assert!((x.coefficient(&w(&[L])) - c(0.5)).norm() < 1e-16);
        assert!((x.coefficient(&w(&[R])) - c(0.5)).norm() < 1e-16);
        assert!(x.max_coefficient_diff(&x.adjoint()) < 1e-16);
        assert!(pp.max_coefficient_diff(&pp.adjoint()) < 1e-16);
        let comm = x.commutator(&pp).normal_order();
        let expected = P::constant(Complex64::new(0.0, 1.0));
        assert!(comm.max_coefficient_diff(&expected) < 1e-15);
    }

    #[test]
    fn commutator_matrix_interior() {
        let d = 10;
        let comm = P::lower().commutator(&P::raise());
        let m = comm.to_matrix(d);
        assert!(
            m.max_abs_diff_block(&FockMatrix::identity(d), d - 1)
                .unwrap()
                < 1e-12
        );
    }

    #[test]
    fn dump_is_sorted_by_length_then_letters() {
        let p = &(&P::word(&[L, R]) + &P::word(&[R])) + &P::word(&[L, L, R]);
        let text = p.dump();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].ends_with(") 1"));
        assert!(lines[1].ends_with(") a+"));
        assert!(lines[2].ends_with(") a"));
        assert!(lines[3].ends_with(") a+ a"));
        assert!(lines[4].ends_with(") a+ a a"));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = &P::word(&[L, R]) - &P::word(&[L, R]);
        assert!(p.is_empty());
        let q = P::term(w(&[R]), c(0.0));
        assert!(q.is_empty());
    }

    #[test]
    fn distinct_permutation_counts() {
        assert_eq!(w(&[R, R, L, L]).distinct_permutations().len(), 6);
        assert_eq!(w(&[R, L, L]).distinct_permutations().len(), 3);
        assert_eq!(LadderWord::identity().distinct_permutations().len(), 1);
    }
}
