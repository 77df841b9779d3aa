use std::ops::Range;

/// Splits text into sentence byte ranges.
///
/// A sentence ends at `.`, `?` or `!` when followed by whitespace and then an
/// uppercase letter, and at every blank line. Spans are trimmed and together
/// cover every non-whitespace character of the input.
pub fn split_sentences(text: &str) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    let mut end = 0;
    let mut newlines = 0;

    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if c == '\n' {
                newlines += 1;
                if newlines >= 2 {
                    if let Some(s) = start.take() {
                        spans.push(s..end);
                    }
                }
            }
            continue;
        }
        newlines = 0;
        if start.is_none() {
            start = Some(i);
        }
        end = i + c.len_utf8();
        if matches!(c, '.' | '?' | '!') && starts_new_sentence(&text[end..]) {
            if let Some(s) = start.take() {
                spans.push(s..end);
            }
        }
    }
    if let Some(s) = start {
        spans.push(s..end);
    }
    spans
}

fn starts_new_sentence(rest: &str) -> bool {
    let mut chars = rest.chars();
    match chars.next() {
        Some(c) if c.is_whitespace() => {}
        _ => return false,
    }
    chars
        .find(|c| !c.is_whitespace())
        .is_some_and(char::is_uppercase)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(text: &str) -> Vec<&str> {
        split_sentences(text)
            .into_iter()
            .map(|r| &text[r])
            .collect()
    }

    #[test]
    fn empty_input() {
        assert!(split_sentences("").is_empty());
        assert!(split_sentences("  \n\n ").is_empty());
    }

    #[test]
    fn terminal_punctuation() {
        assert_eq!(texts("Verify now. Thanks."), vec!["Verify now.", "Thanks."]);
        assert_eq!(texts("Really?! Yes."), vec!["Really?!", "Yes."]);
    }

    #[test]
    fn blank_line_boundary() {
        assert_eq!(
            texts("Dear user\n\nClick here"),
            vec!["Dear user", "Click here"]
        );
        assert_eq!(
            texts("Dear user\n \t\nClick here"),
            vec!["Dear user", "Click here"]
        );
    }

    #[test]
    fn no_boundary_without_uppercase_or_space() {
        assert_eq!(
            texts("Pay $3.50 now. ok then"),
            vec!["Pay $3.50 now. ok then"]
        );
        assert_eq!(
            texts("see example.com Today"),
            vec!["see example.com Today"]
        );
        assert_eq!(
            texts("Thank you,\nAccount Services"),
            vec!["Thank you,\nAccount Services"]
        );
    }

    #[test]
    fn spans_cover_all_non_whitespace() {
        let text = "  One. Two!\n\nthree four?  Five ";
        let covered: usize = split_sentences(text)
            .into_iter()
            .map(|r| text[r].chars().filter(|c| !c.is_whitespace()).count())
            .sum();
        assert_eq!(covered, text.chars().filter(|c| !c.is_whitespace()).count());
    }
}
