//! Wire formats: element strings, the square JSON document, and the
//! verdict JSON document.
//!
//! Element strings render per carrier and parse back exactly:
//! abelian as coordinate vectors `(e1,...,em;f1,...,fr)`, table-group
//! elements as `#index`, semidirect elements as `a^i*b^j`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianElement, Element, Group};
use crate::oracle::Verdict;
use crate::parser::{parse_group, render_group};
use crate::square::Square;

pub fn render_element(group: &Group, e: &Element) -> Result<String> {
    if !group.contains(e) {
        return Err(Error::CarrierMismatch(format!("{e:?} in {}", group.describe())));
    }
    Ok(match e {
        Element::Abelian(x) => {
            let torsion: Vec<String> = x.torsion.iter().map(u64::to_string).collect();
            let free: Vec<String> = x.free.iter().map(BigInt::to_string).collect();
            format!("({};{})", torsion.join(","), free.join(","))
        }
        Element::Table(i) => format!("#{i}"),
        Element::Semidirect { a, b } => format!("a^{a}*b^{b}"),
    })
}

pub fn parse_element(group: &Group, text: &str) -> Result<Element> {
    let bad = |message: &str| Error::ElementParse {
        input: text.to_string(),
        message: message.to_string(),
    };
    let e = match group {
        Group::Abelian(spec) => {
            let inner = text
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| bad("expected (torsion;free)"))?;
            let (t_part, f_part) =
                inner.split_once(';').ok_or_else(|| bad("missing ';' separator"))?;
            let torsion = split_coords(t_part)
                .iter()
                .map(|s| s.parse::<u64>().map_err(|_| bad("bad torsion coordinate")))
                .collect::<Result<Vec<_>>>()?;
            let free = split_coords(f_part)
                .iter()
                .map(|s| s.parse::<BigInt>().map_err(|_| bad("bad free coordinate")))
                .collect::<Result<Vec<_>>>()?;
            if torsion.len() != spec.torsion().len() || free.len() != spec.free_rank() {
                return Err(bad("coordinate count does not match the group"));
            }
            Element::Abelian(AbelianElement { torsion, free })
        }
        Group::Table(_) => {
            let idx = text
                .strip_prefix('#')
                .ok_or_else(|| bad("expected #index"))?
                .parse::<usize>()
                .map_err(|_| bad("bad table index"))?;
            Element::Table(idx)
        }
        Group::Semidirect(_) => {
            let rest = text.strip_prefix("a^").ok_or_else(|| bad("expected a^i*b^j"))?;
            let (i, j) = rest.split_once("*b^").ok_or_else(|| bad("expected a^i*b^j"))?;
            Element::Semidirect {
                a: i.parse().map_err(|_| bad("bad exponent of a"))?,
                b: j.parse().map_err(|_| bad("bad exponent of b"))?,
            }
        }
    };
    if !group.contains(&e) {
        return Err(bad("coordinates are out of range for the group"));
    }
    Ok(e)
}

fn split_coords(part: &str) -> Vec<&str> {
    if part.is_empty() {
        Vec::new()
    } else {
        part.split(',').collect()
    }
}

/// The square JSON document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SquareDoc {
    pub group: String,
    pub n: usize,
    pub entries: Vec<Vec<String>>,
    pub product: Option<String>,
}

pub fn square_to_doc(
    group: &Group,
    square: &Square,
    product: Option<&Element>,
) -> Result<SquareDoc> {
    let entries = square
        .rows()
        .map(|row| row.iter().map(|e| render_element(group, e)).collect())
        .collect::<Result<Vec<Vec<String>>>>()?;
    Ok(SquareDoc {
        group: render_group(group)?,
        n: square.n(),
        entries,
        product: product.map(|p| render_element(group, p)).transpose()?,
    })
}

pub fn doc_to_square(doc: &SquareDoc) -> Result<(Group, Square, Option<Element>)> {
    let group = parse_group(&doc.group)?;
    if doc.entries.len() != doc.n {
        return Err(Error::Document(format!(
            "expected {} rows, found {}",
            doc.n,
            doc.entries.len()
        )));
    }
    let mut entries = Vec::with_capacity(doc.n * doc.n);
    for (i, row) in doc.entries.iter().enumerate() {
        if row.len() != doc.n {
            return Err(Error::Document(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                doc.n
            )));
        }
        for text in row {
            entries.push(parse_element(&group, text)?);
        }
    }
    let square = Square::new(doc.n, entries)?;
    let product = doc.product.as_deref().map(|p| parse_element(&group, p)).transpose()?;
    Ok((group, square, product))
}

pub fn square_to_json(group: &Group, square: &Square, product: Option<&Element>) -> Result<String> {
    let doc = square_to_doc(group, square, product)?;
    Ok(serde_json::to_string_pretty(&doc).expect("document serializes"))
}

pub fn square_from_json(text: &str) -> Result<(Group, Square, Option<Element>)> {
    let doc: SquareDoc =
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    doc_to_square(&doc)
}

/// Verdict JSON: `{"status": ..., "rule": ..., "witness": ...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub status: String,
    pub rule: Option<String>,
    pub witness: Option<SquareDoc>,
}

pub fn verdict_to_doc(group: &Group, verdict: &Verdict) -> Result<VerdictDoc> {
    Ok(VerdictDoc {
        status: verdict.status.to_string(),
        rule: verdict.rule.map(|r| r.to_string()),
        witness: verdict
            .witness
            .as_ref()
            .map(|w| square_to_doc(group, w, None))
            .transpose()?,
    })
}

pub fn verdict_to_json(group: &Group, verdict: &Verdict) -> Result<String> {
    Ok(serde_json::to_string_pretty(&verdict_to_doc(group, verdict)?)
        .expect("document serializes"))
}

/// Aligned grid rendering for terminal output.
pub fn grid_string(group: &Group, square: &Square) -> Result<String> {
    let rendered: Vec<Vec<String>> = square
        .rows()
        .map(|row| row.iter().map(|e| render_element(group, e)).collect())
        .collect::<Result<_>>()?;
    let width = rendered.iter().flatten().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for row in &rendered {
        let padded: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        out.push_str(&padded.join("  "));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FGAbelianSpec;

    #[test]
    fn element_round_trips_per_carrier() {
        let z_c5 = Group::Abelian(FGAbelianSpec::new(1, vec![5]).unwrap());
        let e = Element::abelian(vec![3], vec![-42]);
        let s = render_element(&z_c5, &e).unwrap();
        assert_eq!(s, "(3;-42)");
        assert_eq!(parse_element(&z_c5, &s).unwrap(), e);

        let c9 = Group::cyclic(9).unwrap();
        assert_eq!(render_element(&c9, &Element::abelian(vec![6], vec![])).unwrap(), "(6;)");

        let sd = Group::semidirect(crate::group::SemidirectSpec { m: 7, k: 3, t: 4 }).unwrap();
        let e = Element::Semidirect { a: 4, b: 1 };
        let s = render_element(&sd, &e).unwrap();
        assert_eq!(s, "a^4*b^1");
        assert_eq!(parse_element(&sd, &s).unwrap(), e);
    }

    #[test]
    fn out_of_range_elements_fail_to_parse() {
        let c9 = Group::cyclic(9).unwrap();
        assert!(parse_element(&c9, "(9;)").is_err());
        assert!(parse_element(&c9, "(1,2;)").is_err());
        assert!(parse_element(&c9, "nonsense").is_err());
    }

    #[test]
    fn square_doc_round_trip() {
        let g = Group::Abelian(FGAbelianSpec::free(1));
        let e = |v: i64| Element::abelian(vec![], vec![v]);
        let s = Square::from_rows(vec![
            vec![e(8), e(1), e(6)],
            vec![e(3), e(5), e(7)],
            vec![e(4), e(9), e(2)],
        ])
        .unwrap();
        let json = square_to_json(&g, &s, Some(&e(15))).unwrap();
        let (g2, s2, p2) = square_from_json(&json).unwrap();
        assert_eq!(g, g2);
        assert_eq!(s, s2);
        assert_eq!(p2, Some(e(15)));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(square_from_json("{").is_err());
        let json = r#"{"group": "C9", "n": 2, "entries": [["(0;)", "(1;)"]], "product": null}"#;
        assert!(matches!(square_from_json(json), Err(Error::Document(_))));
    }
}
