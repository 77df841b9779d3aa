//! Message parsing and body extraction.

use mailparse::body::Body;
use mailparse::{DispositionType, MailHeaderMap, ParsedMail};

use super::html::strip_html;

/// Plain text recovered from one message body.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExtractedBody {
    pub text: String,
    /// Set when the MIME tree holds no text/plain or text/html part; `text`
    /// is then empty.
    pub missing_text_part: bool,
}

/// A message reduced to what the classifier reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedMessage {
    pub subject: String,
    pub body: ExtractedBody,
}

#[derive(Debug, thiserror::Error)]
pub enum MessageError {
    #[error("message is empty")]
    Empty,
    #[error("no header block found")]
    NoHeaders,
    #[error(transparent)]
    Mime(#[from] mailparse::MailParseError),
}

/// Parses an RFC 822 message, keeping its subject and extracted body.
pub fn parse_message(raw: &[u8]) -> Result<ParsedMessage, MessageError> {
    if raw.iter().all(u8::is_ascii_whitespace) {
        return Err(MessageError::Empty);
    }
    let mail = mailparse::parse_mail(raw)?;
    if mail.headers.is_empty() {
        return Err(MessageError::NoHeaders);
    }
    let subject = mail
        .headers
        .get_first_value("Subject")
        .map(|s| s.split_whitespace().collect::<Vec<_>>().join(" "))
        .unwrap_or_default();
    Ok(ParsedMessage {
        subject,
        body: body_of(&mail),
    })
}

/// Walks the MIME tree and returns the first text/plain part, falling back
/// to the first text/html part with markup stripped. Never fails: a message
/// that cannot be parsed, or that has no textual part, yields an empty body
/// with `missing_text_part` set.
pub fn extract_body(raw: &[u8]) -> ExtractedBody {
    match mailparse::parse_mail(raw) {
        Ok(mail) => body_of(&mail),
        Err(err) => {
            log::warn!("unparseable message treated as empty: {err}");
            ExtractedBody {
                text: String::new(),
                missing_text_part: true,
            }
        }
    }
}

fn body_of(mail: &ParsedMail<'_>) -> ExtractedBody {
    let mut leaves = Vec::new();
    collect_leaves(mail, &mut leaves);

    let find = |mimetype: &str| {
        leaves
            .iter()
            .copied()
            .find(|part| part.ctype.mimetype.eq_ignore_ascii_case(mimetype))
    };
    if let Some(part) = find("text/plain") {
        return ExtractedBody {
            text: normalize_newlines(&decode_part(part)),
            missing_text_part: false,
        };
    }
    if let Some(part) = find("text/html") {
        return ExtractedBody {
            text: strip_html(&decode_part(part)),
            missing_text_part: false,
        };
    }
    log::debug!("message has no text/plain or text/html part");
    ExtractedBody {
        text: String::new(),
        missing_text_part: true,
    }
}

/// Depth-first, document-order list of non-multipart parts that are not
/// attachments.
fn collect_leaves<'a>(part: &'a ParsedMail<'a>, out: &mut Vec<&'a ParsedMail<'a>>) {
    if part
        .ctype
        .mimetype
        .to_ascii_lowercase()
        .starts_with("multipart/")
    {
        for sub in &part.subparts {
            collect_leaves(sub, out);
        }
        return;
    }
    if part.get_content_disposition().disposition == DispositionType::Attachment {
        return;
    }
    out.push(part);
}

/// Undoes the transfer encoding, then the charset. Undecodable bytes become
/// U+FFFD. A body declared as ASCII that is valid UTF-8 is read as UTF-8,
/// which is what unlabelled 8-bit mail usually is.
fn decode_part(part: &ParsedMail<'_>) -> String {
    let raw = match part.get_body_raw() {
        Ok(raw) => raw,
        Err(err) => {
            log::warn!("bad transfer encoding, using the body as is: {err}");
            let raw = match part.get_body_encoded() {
                Body::Base64(b) | Body::QuotedPrintable(b) => b.get_raw(),
                Body::SevenBit(b) | Body::EightBit(b) => b.get_raw(),
                Body::Binary(b) => b.get_raw(),
            };
            return String::from_utf8_lossy(raw).into_owned();
        }
    };
    let charset = part.ctype.charset.to_ascii_lowercase();
    if matches!(
        charset.as_str(),
        "us-ascii" | "ascii" | "utf-8" | "utf8" | ""
    ) {
        if let Ok(text) = std::str::from_utf8(&raw) {
            return text.to_string();
        }
    }
    part.get_body()
        .unwrap_or_else(|_| String::from_utf8_lossy(&raw).into_owned())
}

fn normalize_newlines(text: &str) -> String {
    text.replace("\r\n", "\n").replace('\r', "\n")
}
