//! Best-effort HTML to plain text.

/// Elements whose content is never text.
const SKIPPED_CONTENT: [&str; 4] = ["script", "style", "noscript", "template"];

/// Elements that open a new paragraph (rendered as a blank line).
const PARAGRAPH_ELEMENTS: [&str; 13] = [
    "p",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "ul",
    "ol",
    "table",
    "blockquote",
    "pre",
    "hr",
];

/// Elements that start a new line.
const LINE_ELEMENTS: [&str; 18] = [
    "br", "div", "li", "tr", "title", "section", "article", "header", "footer", "nav", "dt", "dd",
    "form", "center", "address", "body", "html", "caption",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Break {
    Space,
    Line,
    Paragraph,
}

#[derive(Default)]
struct TextBuilder {
    out: String,
    pending: Option<Break>,
}

impl TextBuilder {
    fn request(&mut self, brk: Break) {
        self.pending = Some(self.pending.map_or(brk, |p| p.max(brk)));
    }

    fn push_text(&mut self, text: &str) {
        for c in text.chars() {
            if c.is_whitespace() {
                self.request(Break::Space);
                continue;
            }
            if let Some(brk) = self.pending.take() {
                if !self.out.is_empty() {
                    match brk {
                        Break::Space => self.out.push(' '),
                        Break::Line => self.out.push('\n'),
                        Break::Paragraph => self.out.push_str("\n\n"),
                    }
                }
            }
            self.out.push(c);
        }
    }

    fn finish(self) -> String {
        self.out
    }
}

/// Removes markup, decodes entities, keeps anchor text, turns block
/// elements into line breaks and drops script/style content.
pub fn strip_html(html: &str) -> String {
    let mut builder = TextBuilder::default();
    let mut text_start = 0;
    let mut i = 0;
    let bytes = html.as_bytes();

    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        let Some(tag) = parse_tag(html, i) else {
            i += 1;
            continue;
        };
        builder.push_text(&html_escape::decode_html_entities(&html[text_start..i]));
        i = tag.end;
        match tag.kind {
            TagKind::Comment | TagKind::Declaration => {}
            TagKind::Open | TagKind::Close | TagKind::SelfClosing => {
                let name = tag.name.as_str();
                if PARAGRAPH_ELEMENTS.contains(&name) {
                    builder.request(Break::Paragraph);
                } else if LINE_ELEMENTS.contains(&name) {
                    builder.request(Break::Line);
                } else if matches!(name, "td" | "th") {
                    builder.request(Break::Space);
                }
                if tag.kind == TagKind::Open && SKIPPED_CONTENT.contains(&name) {
                    i = skip_element_content(html, i, name);
                }
            }
        }
        text_start = i;
    }
    builder.push_text(&html_escape::decode_html_entities(&html[text_start..]));
    builder.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TagKind {
    Open,
    Close,
    SelfClosing,
    Comment,
    Declaration,
}

struct Tag {
    name: String,
    kind: TagKind,
    /// Byte index just past the closing `>`.
    end: usize,
}

/// Recognizes a tag starting at `start` (which holds `<`). Returns `None`
/// when the `<` is literal text.
fn parse_tag(html: &str, start: usize) -> Option<Tag> {
    let rest = &html[start + 1..];
    if let Some(after) = rest.strip_prefix("!--") {
        let end = after
            .find("-->")
            .map(|p| start + 4 + p + 3)
            .unwrap_or(html.len());
        return Some(Tag {
            name: String::new(),
            kind: TagKind::Comment,
            end,
        });
    }
    let first = rest.chars().next()?;
    let (kind, name_start) = match first {
        '/' => (TagKind::Close, 1),
        '!' | '?' => (TagKind::Declaration, 1),
        c if c.is_ascii_alphabetic() => (TagKind::Open, 0),
        _ => return None,
    };
    let name: String = rest[name_start..]
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric() || *c == '-' || *c == ':')
        .collect::<String>()
        .to_ascii_lowercase();
    if name.is_empty() && kind != TagKind::Declaration {
        return None;
    }
    let close = find_tag_end(rest)?;
    let kind = if kind == TagKind::Open && rest[..close].trim_end().ends_with('/') {
        TagKind::SelfClosing
    } else {
        kind
    };
    Some(Tag {
        name,
        kind,
        end: start + 1 + close + 1,
    })
}

/// Position of the `>` ending a tag, skipping quoted attribute values.
fn find_tag_end(rest: &str) -> Option<usize> {
    let mut quote: Option<char> = None;
    for (i, c) in rest.char_indices() {
        match quote {
            Some(q) if c == q => quote = None,
            Some(_) => {}
            None if c == '"' || c == '\'' => quote = Some(c),
            None if c == '>' => return Some(i),
            None if c == '<' => return None,
            None => {}
        }
    }
    None
}

fn skip_element_content(html: &str, from: usize, name: &str) -> usize {
    let needle = format!("</{name}");
    let haystack = html[from..].to_ascii_lowercase();
    match haystack.find(&needle) {
        Some(pos) => {
            let close_start = from + pos;
            html[close_start..]
                .find('>')
                .map(|p| close_start + p + 1)
                .unwrap_or(html.len())
        }
        None => html.len(),
    }
}
