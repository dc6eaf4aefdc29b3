use ftl_core::syntax::{parse_document, parse_text, pretty, tokenize, Vocabulary};

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!(
        "{}/../../fixtures/{name}",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap()
}

#[test]
fn corpus_round_trips() {
    let src = fixture("corpus.ftl");
    let (doc, vocab) = parse_text(&src).unwrap_or_else(|e| panic!("{e}"));
    let printed = pretty::document(&doc, &vocab);
    let (again, _) = parse_document(&tokenize(&printed).unwrap(), &Vocabulary::new())
        .unwrap_or_else(|e| panic!("{e}\n{printed}"));
    assert_eq!(
        doc.without_positions(),
        again.without_positions(),
        "{printed}"
    );
}
