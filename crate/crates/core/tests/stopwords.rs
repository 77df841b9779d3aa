use phishtext::text::{StopwordList, DEFAULT_STOPWORDS, DEFAULT_STOPWORDS_SHA256};
use sha2::{Digest, Sha256};

#[test]
fn bundled_stopword_list_is_the_frozen_copy() {
    let digest = Sha256::digest(DEFAULT_STOPWORDS.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(hex, DEFAULT_STOPWORDS_SHA256);
}

#[test]
fn builtin_list_contains_common_words_only() {
    let list = StopwordList::builtin();
    for word in ["the", "your", "here", "below"] {
        assert!(list.contains(word), "{word}");
    }
    for word in ["click", "verify", "account"] {
        assert!(!list.contains(word), "{word}");
    }
}
