use super::ast::{Atom, Coeff, Formula};

/// Negation normal form: negations pushed into atoms, quantifiers dualized.
pub fn nnf<K: Ord + Clone, C: Coeff>(f: &Formula<Atom<K, C>>) -> Formula<Atom<K, C>> {
    to_nnf(f, false)
}

fn to_nnf<K: Ord + Clone, C: Coeff>(f: &Formula<Atom<K, C>>, neg: bool) -> Formula<Atom<K, C>> {
    match (f, neg) {
        (Formula::True, false) | (Formula::False, true) => Formula::True,
        (Formula::True, true) | (Formula::False, false) => Formula::False,
        (Formula::Atom(a), false) => Formula::Atom(a.clone()),
        (Formula::Atom(a), true) => Formula::Atom(a.negated()),
        (Formula::Not(g), _) => to_nnf(g, !neg),
        (Formula::And(gs), false) | (Formula::Or(gs), true) => {
            Formula::and_all(gs.iter().map(|g| to_nnf(g, neg)).collect())
        }
        (Formula::Or(gs), false) | (Formula::And(gs), true) => {
            Formula::or_all(gs.iter().map(|g| to_nnf(g, neg)).collect())
        }
        (Formula::Exists(v, g), false) | (Formula::Forall(v, g), true) => {
            Formula::exists(v.clone(), to_nnf(g, neg))
        }
        (Formula::Forall(v, g), false) | (Formula::Exists(v, g), true) => {
            Formula::forall(v.clone(), to_nnf(g, neg))
        }
    }
}

/// Disjunctive normal form of a quantifier-free formula: a list of
/// conjunctions of literals. `[]` is false, `[[]]` is true.
pub fn dnf<K: Ord + Clone, C: Coeff>(f: &Formula<Atom<K, C>>) -> Vec<Vec<Atom<K, C>>> {
    fn go<K: Ord + Clone, C: Coeff>(f: &Formula<Atom<K, C>>) -> Vec<Vec<Atom<K, C>>> {
        match f {
            Formula::True => vec![vec![]],
            Formula::False => vec![],
            Formula::Atom(a) => match a.constant_truth() {
                Some(true) => vec![vec![]],
                Some(false) => vec![],
                None => vec![vec![a.clone()]],
            },
            Formula::Or(gs) => gs.iter().flat_map(go).collect(),
            Formula::And(gs) => {
                let mut acc: Vec<Vec<Atom<K, C>>> = vec![vec![]];
                for g in gs {
                    let d = go(g);
                    let mut next = Vec::new();
                    for left in &acc {
                        for right in &d {
                            let mut c = left.clone();
                            c.extend(right.iter().cloned());
                            next.push(c);
                        }
                    }
                    acc = next;
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
            Formula::Not(_) | Formula::Exists(..) | Formula::Forall(..) => {
                panic!("dnf expects a quantifier-free formula in negation normal form")
            }
        }
    }
    go(&nnf(f))
}

/// Rebuilds a formula from its DNF.
pub fn from_dnf<K: Ord + Clone, C: Coeff>(d: Vec<Vec<Atom<K, C>>>) -> Formula<Atom<K, C>> {
    Formula::or_all(
        d.into_iter()
            .map(|c| Formula::and_all(c.into_iter().map(Formula::Atom).collect()))
            .collect(),
    )
}
