use std::fmt;

/// One source file or snippet, either labeled (training / evaluation) or not.
///
/// Line endings are normalized to `\n` on construction, so `lines` joined with
/// `\n` reproduces `text` up to one trailing newline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSample {
    origin: String,
    label: Option<String>,
    text: String,
    lines: Vec<String>,
}

impl SourceSample {
    pub fn new(origin: impl Into<String>, label: Option<String>, text: impl AsRef<str>) -> Self {
        let text = normalize_newlines(text.as_ref());
        let body = text.strip_suffix('\n').unwrap_or(&text);
        let lines = if text.is_empty() {
            Vec::new()
        } else {
            body.split('\n').map(str::to_owned).collect()
        };
        SourceSample {
            origin: origin.into(),
            label,
            text,
            lines,
        }
    }

    /// An unlabeled sample read from text (a pasted snippet, stdin).
    pub fn unlabeled(origin: impl Into<String>, text: impl AsRef<str>) -> Self {
        Self::new(origin, None, text)
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn is_blank(&self) -> bool {
        self.text.trim().is_empty()
    }

    /// Returns a copy with the label removed, as seen by the identifier.
    pub fn without_label(&self) -> Self {
        SourceSample {
            label: None,
            ..self.clone()
        }
    }
}

impl fmt::Display for SourceSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(label) => write!(f, "{} [{}]", self.origin, label),
            None => write!(f, "{}", self.origin),
        }
    }
}

fn normalize_newlines(text: &str) -> String {
    if text.contains('\r') {
        text.replace("\r\n", "\n").replace('\r', "\n")
    } else {
        text.to_owned()
    }
}
