//! Exhaustive reference: every one of the 3^n labellings is classified by the
//! legality clauses applied literally. Independent of the grounded rounds and
//! of the complete-labelling search.

use std::collections::{BTreeMap, BTreeSet};

use super::SemanticsError;
use crate::framework::{Argument, Framework, Label, Labelling, SemanticsKind};

pub const DEFAULT_ORACLE_CAP: usize = 10;

pub fn oracle_all_labellings(framework: &Framework) -> Result<BTreeMap<SemanticsKind, Vec<Labelling>>, SemanticsError> {
    oracle_all_labellings_with_cap(framework, DEFAULT_ORACLE_CAP)
}

pub fn oracle_all_labellings_with_cap(
    framework: &Framework,
    cap: usize,
) -> Result<BTreeMap<SemanticsKind, Vec<Labelling>>, SemanticsError> {
    let n = framework.len();
    if n > cap {
        return Err(SemanticsError::TooLarge { arguments: n, cap });
    }
    let args = framework.arguments();
    let attackers: Vec<Vec<usize>> = args
        .iter()
        .map(|&a| {
            framework
                .attackers_of(a)
                .iter()
                .map(|b| args.iter().position(|x| x == b).unwrap())
                .collect()
        })
        .collect();

    let mut complete: Vec<Vec<Label>> = Vec::new();
    let mut labels = vec![Label::In; n];
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut rest = code;
        for slot in labels.iter_mut() {
            *slot = Label::ALL[rest % 3];
            rest /= 3;
        }
        let legal = |i: usize| -> bool {
            let of = &attackers[i];
            let every_out = of.iter().all(|&b| labels[b] == Label::Out);
            let some_in = of.iter().any(|&b| labels[b] == Label::In);
            match labels[i] {
                Label::In => every_out,
                Label::Out => some_in,
                Label::Undec => !every_out && !some_in,
            }
        };
        if (0..n).all(legal) {
            complete.push(labels.clone());
        }
    }

    let to_labelling = |ls: &Vec<Label>| -> Labelling { args.iter().copied().zip(ls.iter().copied()).collect() };
    let in_of = |ls: &Vec<Label>| -> BTreeSet<Argument> {
        args.iter()
            .zip(ls)
            .filter(|(_, &l)| l == Label::In)
            .map(|(&a, _)| a)
            .collect()
    };
    let ins: Vec<BTreeSet<Argument>> = complete.iter().map(in_of).collect();

    let mut out: BTreeMap<SemanticsKind, Vec<Labelling>> = BTreeMap::new();
    for (idx, ls) in complete.iter().enumerate() {
        let mine = &ins[idx];
        let strictly_below = ins.iter().any(|o| o.is_subset(mine) && o.len() < mine.len());
        let strictly_above = ins.iter().any(|o| o.is_superset(mine) && o.len() > mine.len());
        let l = to_labelling(ls);
        out.entry(SemanticsKind::Complete).or_default().push(l.clone());
        if !strictly_below {
            out.entry(SemanticsKind::Grounded).or_default().push(l.clone());
        }
        if !strictly_above {
            out.entry(SemanticsKind::Preferred).or_default().push(l.clone());
        }
        if ls.iter().all(|&x| x != Label::Undec) {
            out.entry(SemanticsKind::Stable).or_default().push(l);
        }
    }
    for kind in SemanticsKind::ALL {
        let list = out.entry(kind).or_default();
        list.sort_by_key(|l| l.with_label(Label::In));
    }
    Ok(out)
}
