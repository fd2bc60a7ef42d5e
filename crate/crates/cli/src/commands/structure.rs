//! `structure`: group decomposition plus closed-form cross-checks.

use anyhow::Context;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use sandpile_core::dlp::BananaHypotheses;
use sandpile_core::graphs::{fibonacci, lucas, tree_count};
use sandpile_core::{Family, Graph, GroupDescription, Sandpile};

use crate::args::StructureArgs;
use crate::{CommandResult, Status};

#[derive(Debug, Serialize)]
pub struct ClosedForm {
    pub formula: String,
    pub expected_order: String,
    /// Predicted invariant factors, when the family has a known decomposition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_factors: Option<Vec<String>>,
    pub holds: bool,
}

#[derive(Debug, Serialize)]
pub struct StructureReport {
    #[serde(flatten)]
    pub family: Family,
    pub sink: usize,
    #[serde(flatten)]
    pub group: GroupDescription,
    pub tree_count: String,
    pub closed_form: Option<ClosedForm>,
}

pub fn run(args: &StructureArgs) -> anyhow::Result<CommandResult> {
    let family = args.family.with_params(&args.params)?;
    let graph = Graph::from_family(&family).context("invalid family parameters")?;
    let sink = args.sink.unwrap_or_else(|| graph.default_sink());
    let report = describe(graph, sink)?;
    let status = match &report.closed_form {
        Some(c) if !c.holds => Status::Inconsistent,
        _ => Status::Ok,
    };
    Ok(CommandResult::new(status, report))
}

pub fn describe(graph: Graph, sink: usize) -> anyhow::Result<StructureReport> {
    let family = graph.family().cloned().context("graph has no family")?;
    let tree = tree_count(&graph);
    let sandpile = Sandpile::new(graph, sink)?;
    let group = sandpile.group_structure();
    let closed_form = closed_form(&family)?;
    let closed_form = closed_form.map(|(formula, order, factors)| {
        let holds = order == tree
            && group.order == tree
            && factors.as_ref().is_none_or(|f| f == &group.invariant_factors);
        ClosedForm {
            formula,
            expected_order: order.to_string(),
            expected_factors: factors.map(|f| f.iter().map(ToString::to_string).collect()),
            holds,
        }
    });
    Ok(StructureReport {
        family,
        sink,
        group,
        tree_count: tree.to_string(),
        closed_form,
    })
}

type Prediction = (String, BigInt, Option<Vec<BigInt>>);

fn nontrivial(xs: impl IntoIterator<Item = BigInt>) -> Vec<BigInt> {
    xs.into_iter().filter(|x| !x.is_one()).collect()
}

fn closed_form(family: &Family) -> anyhow::Result<Option<Prediction>> {
    Ok(Some(match family {
        Family::SquareCycle(n) => {
            let nb = BigInt::from(*n);
            let f = fibonacci(*n as u32)?;
            let g = nb.gcd(&f);
            let expected = nontrivial([g.clone(), f.clone(), &nb * &f / &g]);
            ("n F_n^2".to_string(), &nb * &f * &f, Some(expected))
        }
        Family::Wheel(n) if n % 2 == 1 => {
            let l = lucas(*n as u32)?;
            ("L_n^2".to_string(), &l * &l, Some(vec![l.clone(), l]))
        }
        Family::Wheel(n) => {
            let f = fibonacci(*n as u32)?;
            let five_f = &f * 5;
            ("5 F_n^2".to_string(), &f * &five_f, Some(nontrivial([f, five_f])))
        }
        Family::Banana(s) => {
            let prod: BigInt = s.iter().map(|&x| BigInt::from(x)).product();
            let order: BigInt = s.iter().map(|&x| &prod / x).sum();
            // cyclic when the order is a prime power prime to every branch length
            let expected = BananaHypotheses::check(s).ok().map(|_| vec![order.clone()]);
            ("sum_i prod_{j != i} s_j".to_string(), order, expected)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::FamilyName;

    fn report(family: FamilyName, params: &str) -> StructureReport {
        let g = Graph::from_family(&family.with_params(params).unwrap()).unwrap();
        let sink = g.default_sink();
        describe(g, sink).unwrap()
    }

    fn strings(r: &StructureReport) -> Vec<String> {
        r.group.invariant_factors.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn worked_structures() {
        let r = report(FamilyName::Wheel, "7");
        assert_eq!((strings(&r), r.tree_count.as_str()), (vec!["29".into(), "29".into()], "841"));
        assert!(r.closed_form.unwrap().holds);

        let r = report(FamilyName::SquareCycle, "7");
        assert_eq!((strings(&r), r.tree_count.as_str()), (vec!["13".into(), "91".into()], "1183"));
        assert!(r.closed_form.unwrap().holds);

        let r = report(FamilyName::Banana, "3,7,10");
        assert_eq!((strings(&r), r.tree_count.as_str()), (vec!["121".into()], "121"));
        assert!(r.closed_form.unwrap().holds);
    }

    #[test]
    fn closed_forms_hold_on_small_members() {
        for n in 3..=14 {
            assert!(report(FamilyName::Wheel, &n.to_string()).closed_form.unwrap().holds, "W{n}");
        }
        for n in 5..=16 {
            assert!(report(FamilyName::SquareCycle, &n.to_string()).closed_form.unwrap().holds, "C{n}");
        }
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(report(FamilyName::Wheel, "7")).unwrap();
        assert_eq!(v["family"], "wheel");
        assert_eq!(v["params"], 7);
        assert_eq!(v["order"], "841");
        assert_eq!(v["factors"], serde_json::json!([29, 29]));
        assert_eq!(v["generators"].as_array().unwrap().len(), 2);
    }
}
