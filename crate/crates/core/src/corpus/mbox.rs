//! Splitting an mbox file into messages.
//!
//! A separator is a line starting with `From ` at the start of the file or
//! right after a blank line. It is accepted when it carries a time of day
//! (`hh:mm`). A `From ` line that names a sender but has no time is a
//! malformed separator: it still starts a new message, and that message is
//! reported as skipped. Any other `From ` line is body text.

/// One chunk of an mbox file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct MboxChunk {
    /// Zero-based message index within the file.
    pub index: usize,
    /// Byte offset of the chunk's first line.
    pub offset: usize,
    pub content: Result<Vec<u8>, String>,
}

enum Separator {
    Valid,
    Malformed,
}

fn classify_line(line: &[u8]) -> Option<Separator> {
    let rest = line.strip_prefix(b"From ")?;
    if has_time_of_day(rest) {
        return Some(Separator::Valid);
    }
    let sender = rest
        .split(|b| b.is_ascii_whitespace())
        .find(|w| !w.is_empty())?;
    if sender.contains(&b'@') || sender.eq_ignore_ascii_case(b"MAILER-DAEMON") {
        Some(Separator::Malformed)
    } else {
        None
    }
}

/// True when `bytes` contains `\d+:\d\d`.
fn has_time_of_day(bytes: &[u8]) -> bool {
    bytes.windows(4).any(|w| {
        w[0].is_ascii_digit() && w[1] == b':' && w[2].is_ascii_digit() && w[3].is_ascii_digit()
    })
}

fn is_blank(line: &[u8]) -> bool {
    line.iter().all(u8::is_ascii_whitespace)
}

/// Undoes mboxrd quoting: `>From ` becomes `From `, `>>From ` becomes
/// `>From `.
fn unquote(line: &[u8]) -> &[u8] {
    let quotes = line.iter().take_while(|&&b| b == b'>').count();
    if quotes > 0 && line[quotes..].starts_with(b"From ") {
        &line[1..]
    } else {
        line
    }
}

pub(crate) fn split_mbox(data: &[u8]) -> Vec<MboxChunk> {
    struct Open {
        offset: usize,
        malformed: Option<String>,
        body: Vec<u8>,
    }

    let mut chunks = Vec::new();
    let mut current: Option<Open> = None;
    let mut preamble_start: Option<usize> = None;
    let mut previous_blank = true;
    let mut offset = 0;

    fn close(open: Open, chunks: &mut Vec<MboxChunk>) {
        let content = match open.malformed {
            Some(reason) => Err(reason),
            None => Ok(open.body),
        };
        chunks.push(MboxChunk {
            index: chunks.len(),
            offset: open.offset,
            content,
        });
    }

    for line in data.split_inclusive(|&b| b == b'\n') {
        let separator = if previous_blank {
            classify_line(line)
        } else {
            None
        };
        match separator {
            Some(kind) => {
                if let Some(start) = preamble_start.take() {
                    close(
                        Open {
                            offset: start,
                            malformed: Some("text before the first From_ line".into()),
                            body: Vec::new(),
                        },
                        &mut chunks,
                    );
                }
                if let Some(open) = current.take() {
                    close(open, &mut chunks);
                }
                let malformed = match kind {
                    Separator::Valid => None,
                    Separator::Malformed => Some(format!(
                        "malformed From_ separator (no time of day): {:?}",
                        String::from_utf8_lossy(line).trim_end()
                    )),
                };
                current = Some(Open {
                    offset,
                    malformed,
                    body: Vec::new(),
                });
            }
            None => match current.as_mut() {
                Some(open) => open.body.extend_from_slice(unquote(line)),
                None if !is_blank(line) && preamble_start.is_none() => {
                    preamble_start = Some(offset);
                }
                None => {}
            },
        }
        previous_blank = is_blank(line);
        offset += line.len();
    }
    if let Some(start) = preamble_start {
        close(
            Open {
                offset: start,
                malformed: Some("no From_ separator found".into()),
                body: Vec::new(),
            },
            &mut chunks,
        );
    }
    if let Some(open) = current {
        close(open, &mut chunks);
    }
    chunks
}
