//! Hand-compiled paradigm tables for the shipped language packs.
//!
//! Every table below was written out cell by cell from reference grammars,
//! not derived from the pack rules. `generate_forms` must agree on every cell.

use std::collections::BTreeMap;

use exhibit_scribe::lexicon::{generate_forms, PackSet};

pub type Oracle = Vec<(&'static str, &'static str, BTreeMap<String, String>)>;

fn table(cells: &[(&str, &str)]) -> BTreeMap<String, String> {
    cells
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn noun4(sg: &str, pl: &str) -> BTreeMap<String, String> {
    table(&[("sg.nom", sg), ("sg.acc", sg), ("pl.nom", pl), ("pl.acc", pl)])
}

/// Present 1sg..3pl, past 1sg..3pl, then the participle cells.
fn en_verb(present: [&str; 6], past: [&str; 6], participle: &str) -> BTreeMap<String, String> {
    let mut cells = Vec::new();
    let slots = ["1.sg", "2.sg", "3.sg", "1.pl", "2.pl", "3.pl"];
    for (slot, form) in slots.iter().zip(present) {
        cells.push((format!("present.{slot}"), form.to_string()));
    }
    for (slot, form) in slots.iter().zip(past) {
        cells.push((format!("past.{slot}"), form.to_string()));
    }
    for g in ["masc", "fem", "neut"] {
        for n in ["sg", "pl"] {
            cells.push((format!("participle.{g}.{n}"), participle.to_string()));
        }
    }
    cells.into_iter().collect()
}

fn demo_verb(present: [&str; 6], past: [&str; 6], participle: [&str; 4]) -> BTreeMap<String, String> {
    let mut cells = Vec::new();
    let slots = ["1.sg", "2.sg", "3.sg", "1.pl", "2.pl", "3.pl"];
    for (slot, form) in slots.iter().zip(present) {
        cells.push((format!("present.{slot}"), form.to_string()));
    }
    for (slot, form) in slots.iter().zip(past) {
        cells.push((format!("past.{slot}"), form.to_string()));
    }
    let part_slots = ["masc.sg", "fem.sg", "masc.pl", "fem.pl"];
    for (slot, form) in part_slots.iter().zip(participle) {
        cells.push((format!("participle.{slot}"), form.to_string()));
    }
    cells.into_iter().collect()
}

fn demo_adj(ms: &str, fs: &str, mp: &str, fp: &str) -> BTreeMap<String, String> {
    let mut cells = Vec::new();
    for case in ["nom", "acc"] {
        cells.push((format!("masc.sg.{case}"), ms.to_string()));
        cells.push((format!("fem.sg.{case}"), fs.to_string()));
        cells.push((format!("masc.pl.{case}"), mp.to_string()));
        cells.push((format!("fem.pl.{case}"), fp.to_string()));
    }
    cells.into_iter().collect()
}

pub fn english_oracle() -> Oracle {
    vec![
        ("statue", "regular-noun", noun4("statue", "statues")),
        ("glass", "sibilant-noun", noun4("glass", "glasses")),
        ("category", "y-noun", noun4("category", "categories")),
        ("sheep", "invariable-noun", noun4("sheep", "sheep")),
        ("kouros", "regular-noun", noun4("kouros", "kouroi")),
        (
            "sculpt",
            "regular-verb",
            en_verb(
                ["sculpt", "sculpt", "sculpts", "sculpt", "sculpt", "sculpt"],
                ["sculpted"; 6],
                "sculpted",
            ),
        ),
        (
            "create",
            "e-verb",
            en_verb(
                ["create", "create", "creates", "create", "create", "create"],
                ["created"; 6],
                "created",
            ),
        ),
        (
            "carry",
            "y-verb",
            en_verb(
                ["carry", "carry", "carries", "carry", "carry", "carry"],
                ["carried"; 6],
                "carried",
            ),
        ),
        (
            "find",
            "regular-verb",
            en_verb(
                ["find", "find", "finds", "find", "find", "find"],
                ["found"; 6],
                "found",
            ),
        ),
        (
            "be",
            "regular-verb",
            en_verb(
                ["am", "are", "is", "are", "are", "are"],
                ["was", "were", "was", "were", "were", "were"],
                "been",
            ),
        ),
    ]
}

pub fn demo_oracle() -> Oracle {
    vec![
        ("statua", "fem-a", noun4("statua", "statue")),
        ("vaso", "masc-o", noun4("vaso", "vasi")),
        ("scultore", "e-class", noun4("scultore", "scultori")),
        ("città", "invariable-noun", noun4("città", "città")),
        ("luogo", "masc-o", noun4("luogo", "luoghi")),
        ("nuovo", "adj-o", demo_adj("nuovo", "nuova", "nuovi", "nuove")),
        ("grande", "adj-e", demo_adj("grande", "grande", "grandi", "grandi")),
        ("arcaico", "adj-o", demo_adj("arcaico", "arcaica", "arcaici", "arcaiche")),
        (
            "trovare",
            "are",
            demo_verb(
                ["trovo", "trovi", "trova", "troviamo", "trovate", "trovano"],
                ["trovai", "trovasti", "trovò", "trovammo", "trovaste", "trovarono"],
                ["trovato", "trovata", "trovati", "trovate"],
            ),
        ),
        (
            "scolpire",
            "ire-isc",
            demo_verb(
                ["scolpisco", "scolpisci", "scolpisce", "scolpiamo", "scolpite", "scolpiscono"],
                ["scolpii", "scolpisti", "scolpì", "scolpimmo", "scolpiste", "scolpirono"],
                ["scolpito", "scolpita", "scolpiti", "scolpite"],
            ),
        ),
        (
            "credere",
            "ere",
            demo_verb(
                ["credo", "credi", "crede", "crediamo", "credete", "credono"],
                ["credei", "credesti", "credé", "credemmo", "credeste", "crederono"],
                ["creduto", "creduta", "creduti", "credute"],
            ),
        ),
        (
            "partire",
            "ire",
            demo_verb(
                ["parto", "parti", "parte", "partiamo", "partite", "partono"],
                ["partii", "partisti", "partì", "partimmo", "partiste", "partirono"],
                ["partito", "partita", "partiti", "partite"],
            ),
        ),
        (
            "essere",
            "ere",
            demo_verb(
                ["sono", "sei", "è", "siamo", "siete", "sono"],
                ["fui", "fosti", "fu", "fummo", "foste", "furono"],
                ["stato", "stata", "stati", "state"],
            ),
        ),
    ]
}

/// Compares every oracle table with the generated one; returns the
/// number of cells that agree.
pub fn check(code: &str, oracle: Oracle) -> usize {
    let packs = PackSet::builtin();
    let pack = packs.get(code).unwrap();
    let mut cells = 0;
    for (lemma, class, expected) in oracle {
        let generated = generate_forms(lemma, class, pack).unwrap_or_else(|e| panic!("{code}: {lemma}/{class}: {e}"));
        assert_eq!(generated, expected, "{code}: {lemma}/{class}");
        cells += expected.len();
    }
    cells
}
