//! Byte-stable tables for the selected suites.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{CampaignConfig, Suite};
use crate::complexes::{DescendantField, Variant};
use crate::contraction::build_datum;
use crate::error::Result;
use crate::linf::{transfer, BcovDgLie, LInfty};
use crate::sho::{c1_cocycle, c2_cocycle, ext_bracket_d3, sho_basis, sho_bracket, structure_constants_d3, ExtElement};
use crate::sl2::{equivariance_bullets, gen_dx, gen_dxi, gen_rotation, Conventions};
use crate::superpoly::SuperPoly;

/// One output file: a name relative to the output directory and its bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFile {
    pub name: String,
    pub contents: String,
}

fn jsonl<T: Serialize>(rows: &[T]) -> String {
    rows.iter().map(|r| serde_json::to_string(r).expect("serializable") + "\n").collect()
}

/// Principal degrees covered by the exported SHO truncation.
const TABLE_PRINCIPAL: i64 = 1;

#[derive(Serialize)]
struct PlainRow {
    a: String,
    b: String,
    bracket: String,
}

#[derive(Serialize)]
struct FieldRow {
    lhs: String,
    rhs: String,
    gen_lhs: String,
    gen_rhs: String,
    value: ExtElement,
}

#[derive(Serialize)]
struct CocycleRow {
    a: String,
    b: String,
    c1: String,
    c2: String,
}

#[derive(Serialize)]
struct ActionRow {
    generator: String,
    h: ExtElement,
    e: ExtElement,
    f: ExtElement,
}

#[derive(Serialize)]
struct BulletRow {
    id: String,
    lhs: ExtElement,
    rhs: ExtElement,
    expected: ExtElement,
}

#[derive(Serialize)]
struct TransferRow {
    inputs: Vec<DescendantField>,
    l2: DescendantField,
}

fn structure_table(d: usize) -> Result<TableFile> {
    let contents = if d == 3 {
        jsonl(&structure_constants_d3(TABLE_PRINCIPAL)?)
    } else {
        let basis: Vec<SuperPoly> = (-1..=TABLE_PRINCIPAL).flat_map(|n| sho_basis(d, n)).collect();
        let mut rows = Vec::new();
        for f in &basis {
            for g in &basis {
                let br = sho_bracket(f, g)?;
                if !br.is_zero() {
                    rows.push(PlainRow { a: f.to_text(), b: g.to_text(), bracket: br.to_text() });
                }
            }
        }
        jsonl(&rows)
    };
    Ok(TableFile { name: "sho_structure.jsonl".into(), contents })
}

fn field_rows() -> Result<Vec<FieldRow>> {
    let ext = ExtElement::from_generator;
    let mut rows = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            for k in (j + 1)..=3 {
                let (a, b) = (gen_dx(i), gen_rotation(j, k));
                rows.push(FieldRow {
                    lhs: format!("dx{i}"),
                    rhs: format!("xi{k}dx{j} - xi{j}dx{k}"),
                    gen_lhs: a.to_text(),
                    gen_rhs: b.to_text(),
                    value: ext_bracket_d3(&ext(&a)?, &ext(&b)?)?,
                });
            }
        }
        for j in 1..=3 {
            let (a, b) = (gen_dxi(i), gen_dx(j));
            rows.push(FieldRow {
                lhs: format!("dxi{i}"),
                rhs: format!("dx{j}"),
                gen_lhs: a.to_text(),
                gen_rhs: b.to_text(),
                value: ext_bracket_d3(&ext(&a)?, &ext(&b)?)?,
            });
        }
    }
    Ok(rows)
}

fn cocycle_rows() -> Result<Vec<CocycleRow>> {
    let basis: Vec<SuperPoly> = (-1..=TABLE_PRINCIPAL).flat_map(|n| sho_basis(3, n)).collect();
    let mut rows = Vec::new();
    for f in &basis {
        for g in &basis {
            let (c1, c2) = (c1_cocycle(f, g)?, c2_cocycle(f, g)?);
            if !(num_traits::Zero::is_zero(&c1) && num_traits::Zero::is_zero(&c2)) {
                rows.push(CocycleRow { a: f.to_text(), b: g.to_text(), c1: c1.to_string(), c2: c2.to_string() });
            }
        }
    }
    Ok(rows)
}

fn sl2_tables() -> Result<Vec<TableFile>> {
    let conv = Conventions::default();
    let mut actions = Vec::new();
    let mut elems: Vec<ExtElement> = vec![ExtElement::e1(), ExtElement::e2()];
    for n in -1..=1 {
        for g in sho_basis(3, n) {
            elems.push(ExtElement::from_generator(&g)?);
        }
    }
    for v in elems {
        actions.push(ActionRow {
            generator: v.to_text(),
            h: conv.act_h(&v)?,
            e: conv.act_e(&v)?,
            f: conv.act_f(&v)?,
        });
    }
    let bullets: Vec<BulletRow> = equivariance_bullets(&conv)?
        .into_iter()
        .map(|c| BulletRow { id: c.id, lhs: c.lhs, rhs: c.rhs, expected: c.expected })
        .collect();
    Ok(vec![
        TableFile { name: "sl2_action.jsonl".into(), contents: jsonl(&actions) },
        TableFile { name: "sl2_bullets.jsonl".into(), contents: jsonl(&bullets) },
    ])
}

/// Number of transferred-bracket samples written.
const TRANSFER_SAMPLES: usize = 24;

fn transfer_table(cfg: &CampaignConfig) -> Result<TableFile> {
    let datum = build_datum(cfg.d, Variant::Mbcov)?;
    let base = BcovDgLie::new(*datum.complex());
    let tr = transfer(&base, &datum, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let idx = datum.complex().carrier_summands();
    let mut rows = Vec::new();
    while rows.len() < TRANSFER_SAMPLES.min(cfg.trials) {
        let mut xs = Vec::new();
        for _ in 0..2 {
            let i = idx[rand::Rng::gen_range(&mut rng, 0..idx.len())];
            xs.push(datum.complex().random_carrier_element(&mut rng, &i, cfg.max_degree.min(i.xi_degree as u32 + 2))?);
        }
        if xs.iter().any(DescendantField::is_zero) {
            continue;
        }
        let l2 = tr.bracket(&[&xs[0], &xs[1]])?;
        rows.push(TransferRow { inputs: xs, l2 });
    }
    Ok(TableFile { name: "transfer_samples.jsonl".into(), contents: jsonl(&rows) })
}

/// Tables for the selected suites, in a fixed order. Suites that do not
/// apply to the configuration contribute nothing.
pub fn export_tables(cfg: &CampaignConfig) -> Result<Vec<TableFile>> {
    cfg.validate()?;
    let mut out = Vec::new();
    if cfg.runs(Suite::Sho) || cfg.runs(Suite::Cocycle) {
        out.push(structure_table(cfg.d)?);
    }
    if cfg.d == 3 && cfg.runs(Suite::Cocycle) {
        out.push(TableFile { name: "extension_fields.jsonl".into(), contents: jsonl(&field_rows()?) });
        out.push(TableFile { name: "extension_cocycles.jsonl".into(), contents: jsonl(&cocycle_rows()?) });
    }
    if cfg.d == 3 && cfg.runs(Suite::Sl2) {
        out.extend(sl2_tables()?);
    }
    if cfg.variant == Variant::Mbcov && cfg.runs(Suite::Transfer) {
        out.push(transfer_table(cfg)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_row_is_present() {
        let cfg = CampaignConfig { suites: vec![Suite::Cocycle], ..Default::default() };
        let tables = export_tables(&cfg).unwrap();
        let fields = tables.iter().find(|t| t.name == "extension_fields.jsonl").unwrap();
        let row = fields.contents.lines().find(|l| l.contains("\"lhs\":\"dx1\",\"rhs\":\"xi3dx2 - xi2dx3\"")).unwrap();
        assert!(row.contains("\"value\":{\"gen\":\"0\",\"e1\":\"1\",\"e2\":\"0\"}"), "{row}");
    }

    #[test]
    fn empty_selection_gives_no_tables() {
        let cfg = CampaignConfig { suites: vec![], ..Default::default() };
        assert!(export_tables(&cfg).unwrap().is_empty());
    }
}
