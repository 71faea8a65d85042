//! Decision procedures: the minimum-order and 2x2 impossibility rules, the
//! full characterization of 3-magic finitely generated abelian groups, the
//! order-only sufficiency conditions, and the table-group pipeline with
//! search fallback.

use std::fmt;

use crate::error::Result;
use crate::group::abelian::factorize_u128;
use crate::group::{FGAbelianSpec, Group, Order, TableGroup};
use crate::search::{enumerate_abelian_specs, search_general, OutcomeKind, SearchOptions};
use crate::square::Square;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Magic,
    NotMagic,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Magic => "Magic",
            Status::NotMagic => "NotMagic",
            Status::Unknown => "Unknown",
        })
    }
}

/// Citation tag for the decision rule a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    MinOrder,
    No2Magic,
    Infinite,
    OddOrder,
    Cyclic,
    AlphaGe4,
    C4SqOrC8Sq,
    C2xC8,
    C4xC8,
    TwoGroupFail,
    PrimeGe5,
    Cyclic2i3,
    NineDivides,
    C2kC3Fail,
    NaPrimeGe11,
    NaOddSquare,
    Search,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::MinOrder => "MIN_ORDER",
            Rule::No2Magic => "NO_2MAGIC",
            Rule::Infinite => "INFINITE",
            Rule::OddOrder => "ODD_ORDER",
            Rule::Cyclic => "CYCLIC",
            Rule::AlphaGe4 => "ALPHA_GE4",
            Rule::C4SqOrC8Sq => "C4SQ_OR_C8SQ",
            Rule::C2xC8 => "C2xC8",
            Rule::C4xC8 => "C4xC8",
            Rule::TwoGroupFail => "TWO_GROUP_FAIL",
            Rule::PrimeGe5 => "PRIME_GE5",
            Rule::Cyclic2i3 => "CYCLIC_2I3",
            Rule::NineDivides => "NINE_DIVIDES",
            Rule::C2kC3Fail => "C2K_C3_FAIL",
            Rule::NaPrimeGe11 => "NA_PRIME_GE11",
            Rule::NaOddSquare => "NA_ODD_SQUARE",
            Rule::Search => "SEARCH",
        })
    }
}

/// A decision together with the rule that produced it and, optionally, a
/// concrete witness square.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: Status,
    pub rule: Option<Rule>,
    pub witness: Option<Square>,
}

impl Verdict {
    pub fn new(status: Status, rule: Rule) -> Verdict {
        Verdict { status, rule: Some(rule), witness: None }
    }

    pub fn with_witness(status: Status, rule: Rule, witness: Square) -> Verdict {
        Verdict { status, rule: Some(rule), witness: Some(witness) }
    }

    pub fn is_magic(&self) -> bool {
        self.status == Status::Magic
    }
}

/// Order-only fast rules. Returns `None` when they do not decide:
/// n = 1 is trivially magic, no group is 2-magic, and an n-magic group
/// needs at least n^2 elements.
pub fn decide_n_magic_bound(order: &Order, n: usize) -> Option<Verdict> {
    if n == 1 {
        return Some(Verdict::new(Status::Magic, Rule::MinOrder));
    }
    if n == 2 {
        return Some(Verdict::new(Status::NotMagic, Rule::No2Magic));
    }
    if let Order::Finite(m) = order {
        if *m < (n as u128) * (n as u128) {
            return Some(Verdict::new(Status::NotMagic, Rule::MinOrder));
        }
    }
    None
}

/// The full characterization of 3-magic finitely generated abelian groups.
/// Never returns `Unknown`.
pub fn decide_3magic_abelian(spec: &FGAbelianSpec) -> Verdict {
    if spec.free_rank() > 0 {
        return Verdict::new(Status::Magic, Rule::Infinite);
    }
    let Order::Finite(n) = spec.order() else { unreachable!("free rank 0") };
    if n < 9 {
        return Verdict::new(Status::NotMagic, Rule::MinOrder);
    }
    if n % 2 == 1 {
        return Verdict::new(Status::Magic, Rule::OddOrder);
    }
    let dec = spec.primary_decomposition();
    let alpha = |i: u32| dec.alpha(i);
    let max_two_exp = dec.by_prime().get(&2).and_then(|e| e.last().copied()).unwrap_or(0);
    if dec.is_two_group() {
        if max_two_exp >= 4 {
            return Verdict::new(Status::Magic, Rule::AlphaGe4);
        }
        if alpha(2) >= 2 || alpha(3) >= 2 {
            return Verdict::new(Status::Magic, Rule::C4SqOrC8Sq);
        }
        if alpha(3) == 1 && alpha(1) >= 1 {
            return Verdict::new(Status::Magic, Rule::C2xC8);
        }
        if alpha(3) == 1 && alpha(2) == 1 {
            return Verdict::new(Status::Magic, Rule::C4xC8);
        }
        return Verdict::new(Status::NotMagic, Rule::TwoGroupFail);
    }
    if dec.primes().any(|p| p >= 5) {
        return Verdict::new(Status::Magic, Rule::PrimeGe5);
    }
    // remaining shape: 2^a * 3^b with a, b >= 1
    if max_two_exp >= 2 {
        return Verdict::new(Status::Magic, Rule::Cyclic2i3);
    }
    if n % 9 == 0 {
        return Verdict::new(Status::Magic, Rule::NineDivides);
    }
    Verdict::new(Status::NotMagic, Rule::C2kC3Fail)
}

/// Order-only sufficiency for arbitrary (in particular nonabelian) groups:
/// a prime divisor of at least 11, or an odd prime whose square divides the
/// order, forces a 3-magic subgroup. Returns `Unknown` otherwise.
pub fn nonabelian_sufficient(order: u128) -> Verdict {
    let factors = factorize_u128(order);
    if factors.iter().any(|&(p, _)| p >= 11) {
        return Verdict::new(Status::Magic, Rule::NaPrimeGe11);
    }
    if factors.iter().any(|&(p, e)| p != 2 && e >= 2) {
        return Verdict::new(Status::Magic, Rule::NaOddSquare);
    }
    Verdict { status: Status::Unknown, rule: None, witness: None }
}

/// Recognizes a table group as a finite abelian group by commutativity plus
/// element-order census matching. `None` when noncommutative or ambiguous.
pub fn identify_abelian_spec(table: &TableGroup) -> Option<FGAbelianSpec> {
    if !table.is_commutative() {
        return None;
    }
    let census = table.order_census();
    let mut hits = enumerate_abelian_specs(table.order() as u64)
        .into_iter()
        .filter(|spec| spec.order_census().map(|c| c == census).unwrap_or(false));
    let first = hits.next()?;
    match hits.next() {
        Some(_) => None, // ambiguous; fall back to search rather than guess
        None => Some(first),
    }
}

/// Decision pipeline for a table group: order bounds, then (for n = 3) the
/// order-only sufficiency rules, then the abelian characterization when the
/// group is recognizably abelian, then exhaustive search.
pub fn decide_table_group(
    table: &TableGroup,
    n: usize,
    budget: Option<u64>,
    jobs: usize,
) -> Verdict {
    decide_group(&Group::Table(table.clone()), n, budget, jobs)
}

/// Same pipeline for any group handle.
pub fn decide_group(group: &Group, n: usize, budget: Option<u64>, jobs: usize) -> Verdict {
    if let Some(mut verdict) = decide_n_magic_bound(&group.order(), n) {
        if n == 1 && verdict.is_magic() {
            verdict.witness =
                Square::new(1, vec![group.identity()]).ok();
        }
        return verdict;
    }
    if n == 3 {
        if let Group::Abelian(spec) = group {
            return decide_3magic_abelian(spec);
        }
        let Order::Finite(order) = group.order() else {
            unreachable!("table and semidirect carriers are finite")
        };
        let na = nonabelian_sufficient(order);
        if na.status != Status::Unknown {
            return na;
        }
        if let Group::Table(table) = group {
            if let Some(spec) = identify_abelian_spec(table) {
                return decide_3magic_abelian(&spec);
            }
        }
        if let Group::Semidirect(sd) = group {
            if sd.is_commutative() {
                if let Ok(table) = group.to_table() {
                    if let Some(spec) = identify_abelian_spec(&table) {
                        return decide_3magic_abelian(&spec);
                    }
                }
            }
        }
    } else if group.order() == Order::Infinite {
        // no theory and no complete search for infinite carriers at n >= 4
        return Verdict { status: Status::Unknown, rule: None, witness: None };
    }

    let opts = SearchOptions { budget, jobs, ..SearchOptions::default() };
    match search_general(group, n, &opts) {
        Ok(outcome) => match outcome.kind {
            OutcomeKind::Found(square) => {
                Verdict::with_witness(Status::Magic, Rule::Search, square)
            }
            OutcomeKind::ExhaustedNone => Verdict::new(Status::NotMagic, Rule::Search),
            OutcomeKind::BudgetExceeded => {
                Verdict { status: Status::Unknown, rule: Some(Rule::Search), witness: None }
            }
        },
        Err(_) => Verdict { status: Status::Unknown, rule: Some(Rule::Search), witness: None },
    }
}

/// Convenience used by tests and the sweep: every abelian spec of the given
/// order together with its verdict.
pub fn decide_all_of_order(order: u64) -> Result<Vec<(FGAbelianSpec, Verdict)>> {
    Ok(enumerate_abelian_specs(order)
        .into_iter()
        .map(|spec| {
            let v = decide_3magic_abelian(&spec);
            (spec, v)
        })
        .collect())
}
