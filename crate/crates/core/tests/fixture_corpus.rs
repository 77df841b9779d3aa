//! The bundled 20-email corpus against its hand-traced expectations.

mod common;

#[test]
fn fixture_matches_hand_traced_scores() {
    let (checked, mismatches) = common::fixture_mismatches();
    assert_eq!(checked, 40);
    assert!(
        mismatches.is_empty(),
        "mismatches:\n{}",
        mismatches.join("\n")
    );
}

#[test]
fn fixture_has_ten_emails_per_label() {
    use phishtext::corpus::Label;
    assert_eq!(common::fixture_documents(Label::Phishing).len(), 10);
    assert_eq!(common::fixture_documents(Label::Legitimate).len(), 10);
}
