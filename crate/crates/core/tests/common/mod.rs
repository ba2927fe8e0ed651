#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::Signed;
use rand::Rng;
use toricwedge::exactmath::{q, Rational, StrictLinearSystem};
use toricwedge::wedgepuzzle::{Label, WedgeSignature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Weak,
    Strict,
}

#[derive(Clone, Debug)]
struct Row {
    a: Vec<Rational>,
    b: Rational,
    kind: Kind,
}

impl Row {
    /// Scales so that the first nonzero coefficient is ±1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.a.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.a {
                *c = &*c / &lead;
            }
            self.b = &self.b / &lead;
        }
        self
    }
}

/// Keeps the tightest row per left-hand side.
fn prune(rows: Vec<Row>) -> Vec<Row> {
    let mut best: BTreeMap<Vec<Rational>, (Rational, Kind)> = BTreeMap::new();
    for r in rows.into_iter().map(Row::normalized) {
        let entry = best.entry(r.a).or_insert((r.b.clone(), r.kind));
        let tighter = r.b < entry.0 || (r.b == entry.0 && r.kind == Kind::Strict);
        if tighter {
            *entry = (r.b, r.kind);
        }
    }
    best.into_iter().map(|(a, (b, kind))| Row { a, b, kind }).collect()
}

/// Decides feasibility of a mixed system by substituting out equalities and
/// eliminating the remaining variables one at a time.
pub fn fourier_motzkin(sys: &StrictLinearSystem) -> bool {
    let mut eqs: Vec<(Vec<Rational>, Rational)> = sys.equalities.clone();
    let mut rows: Vec<Row> = sys
        .weak
        .iter()
        .map(|(a, b)| Row { a: a.clone(), b: b.clone(), kind: Kind::Weak })
        .chain(sys.strict.iter().map(|(a, b)| Row {
            a: a.clone(),
            b: b.clone(),
            kind: Kind::Strict,
        }))
        .collect();

    while let Some((a, b)) = eqs.pop() {
        let Some(k) = a.iter().position(|c| !c.is_zero()) else {
            if !b.is_zero() {
                return false;
            }
            continue;
        };
        let substitute = |row_a: &mut Vec<Rational>, row_b: &mut Rational| {
            let f = &row_a[k] / &a[k];
            if f.is_zero() {
                return;
            }
            for (c, ac) in row_a.iter_mut().zip(&a) {
                *c -= &f * ac;
            }
            *row_b -= &f * &b;
        };
        for (ea, eb) in &mut eqs {
            substitute(ea, eb);
        }
        for r in &mut rows {
            substitute(&mut r.a, &mut r.b);
        }
    }

    let n = sys.dimension;
    let mut rows = prune(rows);
    for _ in 0..n {
        let live: Vec<usize> = (0..n).filter(|&k| rows.iter().any(|r| !r.a[k].is_zero())).collect();
        let Some(&k) = live.iter().min_by_key(|&&k| {
            let pos = rows.iter().filter(|r| r.a[k].is_positive()).count();
            let neg = rows.iter().filter(|r| r.a[k].is_negative()).count();
            pos * neg
        }) else {
            break;
        };
        let (mut pos, mut neg, mut rest) = (vec![], vec![], vec![]);
        for r in rows {
            if r.a[k].is_positive() {
                pos.push(r);
            } else if r.a[k].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for m in &neg {
                let (fp, fm) = (-&m.a[k], p.a[k].clone());
                let a = p.a.iter().zip(&m.a).map(|(x, y)| &fp * x + &fm * y).collect();
                let b = &fp * &p.b + &fm * &m.b;
                rest.push(Row { a, b, kind: p.kind.max(m.kind) });
            }
        }
        rows = prune(rest);
    }
    rows.iter().all(|r| match r.kind {
        Kind::Weak => !r.b.is_negative(),
        Kind::Strict => r.b.is_positive(),
    })
}

/// A random system with `1..=5` variables and `1..=10` constraints with small
/// integer coefficients.
pub fn random_system(rng: &mut impl Rng) -> StrictLinearSystem {
    let n = rng.gen_range(1..=5);
    let rows = rng.gen_range(1..=10);
    let mut sys = StrictLinearSystem::new(n);
    for _ in 0..rows {
        let a: Vec<Rational> = (0..n)
            .map(|_| if rng.gen_bool(0.3) { q(0) } else { q(rng.gen_range(-3..=3)) })
            .collect();
        let b = q(rng.gen_range(-3..=3));
        match rng.gen_range(0..10) {
            0 => sys.equal(a, b),
            1..=4 => sys.at_most(a, b),
            _ => sys.less_than(a, b),
        };
    }
    sys
}

/// Facets of `P_m(J)` built by wedging the polygon one copy at a time: a
/// facet containing the wedged label gains the new copy, every other facet
/// splits into one facet per copy.
pub fn iterated_wedge_facets(j: &[usize]) -> Vec<Vec<Label>> {
    let m = j.len();
    let mut facets: Vec<Vec<Label>> = (1..=m)
        .map(|i| vec![Label::new(i, 1), Label::new(i % m + 1, 1)])
        .collect();
    for (i, &ji) in j.iter().enumerate() {
        for copy in 2..=ji {
            let old = Label::new(i + 1, 1);
            let new = Label::new(i + 1, copy);
            facets = facets
                .into_iter()
                .flat_map(|f| {
                    if f.contains(&old) {
                        let mut g = f;
                        g.push(new);
                        vec![g]
                    } else {
                        let mut g1 = f.clone();
                        g1.push(old);
                        let mut g2 = f;
                        g2.push(new);
                        vec![g1, g2]
                    }
                })
                .collect();
        }
    }
    for f in &mut facets {
        f.sort();
    }
    facets.sort();
    facets
}

/// All `J` with `j_i >= 1` and `Σ j_i <= m + extra`.
pub fn signatures(m: usize, extra: usize) -> Vec<WedgeSignature> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=1 + extra).map(move |k| {
                    let mut p = p.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out.into_iter()
        .filter(|j| j.iter().sum::<usize>() <= m + extra)
        .map(|j| WedgeSignature::new(j).expect("valid signature"))
        .collect()
}
