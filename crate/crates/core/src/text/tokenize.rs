/// Clitics split off the end of a word, treebank style (`don't` -> `do n't`).
const CLITICS: [&str; 7] = ["n't", "'s", "'re", "'ve", "'ll", "'d", "'m"];

/// Characters peeled off the end of a URL or e-mail address. Slashes and
/// other URL-internal punctuation stay attached.
const URL_TRAILING: &[char] = &['.', ',', ';', ':', '!', '?', ')', ']', '}', '>', '"', '\''];

pub(crate) fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2018}'
                | '\u{2019}'
                | '\u{201c}'
                | '\u{201d}'
                | '\u{2026}'
                | '\u{ab}'
                | '\u{bb}'
                | '\u{2013}'
                | '\u{2014}'
        )
}

/// Splits a sentence into surface tokens.
///
/// Whitespace separates chunks; leading and trailing punctuation become
/// their own tokens; URLs (`scheme://...`, `www.`) and e-mail addresses stay
/// whole; English clitics are split off.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in sentence.split_whitespace() {
        split_chunk(chunk, &mut tokens);
    }
    tokens
}

fn split_chunk(chunk: &str, out: &mut Vec<String>) {
    if chunk.chars().all(is_punct) {
        push_punct_run(chunk, out);
        return;
    }

    let core_start = chunk
        .char_indices()
        .find(|&(_, c)| !is_punct(c))
        .map(|(i, _)| i)
        .unwrap_or(chunk.len());
    let (leading, rest) = chunk.split_at(core_start);
    for c in leading.chars() {
        out.push(c.to_string());
    }

    let is_link = looks_like_url(rest) || looks_like_email(rest);
    let core_end = rest
        .char_indices()
        .rev()
        .find(|&(_, c)| {
            if is_link {
                !URL_TRAILING.contains(&c)
            } else {
                !is_punct(c)
            }
        })
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(0);
    let (core, trailing) = rest.split_at(core_end);

    if is_link {
        out.push(core.to_string());
    } else {
        split_clitic(core, out);
    }
    push_punct_run(trailing, out);
}

fn push_punct_run(run: &str, out: &mut Vec<String>) {
    if run.is_empty() {
        return;
    }
    if run.len() > 1 && (run.chars().all(|c| c == '.') || run.chars().all(|c| c == '-')) {
        out.push(run.to_string());
        return;
    }
    for c in run.chars() {
        out.push(c.to_string());
    }
}

fn split_clitic(word: &str, out: &mut Vec<String>) {
    let normalized = word.replace('\u{2019}', "'").to_lowercase();
    for clitic in CLITICS {
        if normalized.len() > clitic.len() && normalized.ends_with(clitic) {
            let clitic_chars = clitic.chars().count();
            let split = word
                .char_indices()
                .rev()
                .nth(clitic_chars - 1)
                .map(|(i, _)| i)
                .unwrap_or(0);
            if split > 0 {
                out.push(word[..split].to_string());
                out.push(word[split..].to_string());
                return;
            }
        }
    }
    out.push(word.to_string());
}

pub(crate) fn looks_like_url(s: &str) -> bool {
    let lower = s.to_ascii_lowercase();
    match lower.find("://") {
        Some(i) => {
            i > 0
                && lower[..i]
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '+')
        }
        None => lower.starts_with("www.") && lower.len() > 4,
    }
}

pub(crate) fn looks_like_email(s: &str) -> bool {
    match s.split_once('@') {
        Some((local, domain)) => {
            !local.is_empty()
                && !domain.is_empty()
                && !domain.contains('@')
                && domain.trim_end_matches(URL_TRAILING).contains('.')
        }
        None => false,
    }
}
