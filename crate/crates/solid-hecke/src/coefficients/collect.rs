use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Signed;

use super::gcd::split_monomial;
use super::{Coeff, Monomial, Poly, RatFunc, Symbol};

type Groups<C> = BTreeMap<Vec<(Symbol, i32)>, Vec<(Monomial, C)>>;

/// Groups the terms of `p` by their part outside `s`, printing each group's
/// coefficient as a factored polynomial in `s`:
/// `qh^2*(qh^2-1)*z*s3 + (qh^4-qh^2+1)*z^2*s3`.
pub fn collect_in<C: Coeff + Signed>(p: &Poly<C>, s: Symbol) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut groups: Groups<C> = BTreeMap::new();
    for (m, c) in p.terms() {
        let outer: Vec<(Symbol, i32)> = m.pairs().iter().copied().filter(|&(t, _)| t != s).collect();
        let inner = Monomial::var(s, m.exp(s));
        groups.entry(outer).or_default().push((inner, c.clone()));
    }
    let mut groups: Vec<(Monomial, Poly<C>)> = groups
        .into_iter()
        .map(|(o, ts)| (Monomial::from_pairs(o), Poly::from_terms(ts)))
        .collect();
    groups.sort_by(|a, b| match a.0.display_cmp(&b.0) {
        Ordering::Equal => Ordering::Equal,
        o => o.reverse(),
    });
    let mut out = String::new();
    for (n, (outer, coef)) in groups.iter().enumerate() {
        let (lead, rest) = split_monomial(coef);
        let (neg, body) = if let Some(c) = rest.as_constant() {
            let mut factors = Vec::new();
            if !c.abs().is_one() {
                factors.push(c.abs().to_string());
            }
            push_monomial(&mut factors, &lead);
            push_monomial(&mut factors, outer);
            (c.is_negative(), factors)
        } else {
            let first_negative = rest.display_terms()[0].1.is_negative();
            let rest = if first_negative { rest.neg() } else { rest };
            let mut factors = Vec::new();
            push_monomial(&mut factors, &lead);
            factors.push(format!("({})", rest.to_string().replace(' ', "")));
            push_monomial(&mut factors, outer);
            (first_negative, factors)
        };
        let body = if body.is_empty() { "1".to_string() } else { body.join("*") };
        match (n, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn push_monomial(factors: &mut Vec<String>, m: &Monomial) {
    if !m.is_one() {
        factors.push(m.to_string());
    }
}

impl<C: Coeff + Signed> RatFunc<C> {
    /// Printed form with numerator and denominator collected in `s`.
    pub fn collected(&self, s: Symbol) -> String {
        let (n, d) = self.printed_parts();
        if d.is_one() {
            collect_in(&n, s)
        } else {
            format!("({})/({})", collect_in(&n, s), collect_in(&d, s))
        }
    }
}
