use std::fmt;
use std::str::FromStr;

/// The six non-verbal vocalization categories.
///
/// Ordering follows the category table used for corpus statistics
/// (cheering first, screaming last).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NvStyle {
    Cheering,
    Yelling,
    LaughterOpen,
    LaughterClosed,
    Crying,
    Screaming,
}

impl NvStyle {
    pub const ALL: [NvStyle; 6] = [
        NvStyle::Cheering,
        NvStyle::Yelling,
        NvStyle::LaughterOpen,
        NvStyle::LaughterClosed,
        NvStyle::Crying,
        NvStyle::Screaming,
    ];

    /// Surface name used inside tags.
    pub fn canonical_name(self) -> &'static str {
        match self {
            NvStyle::Cheering => "cheering",
            NvStyle::Yelling => "yelling",
            NvStyle::LaughterOpen => "Laughter-open",
            NvStyle::LaughterClosed => "Laughter-closed",
            NvStyle::Crying => "crying",
            NvStyle::Screaming => "screaming",
        }
    }

    /// Case-insensitive lookup of a style name. Surrounding whitespace is ignored.
    pub fn from_name(name: &str) -> Option<NvStyle> {
        let name = name.trim();
        NvStyle::ALL
            .into_iter()
            .find(|s| s.canonical_name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for NvStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.canonical_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown NV style `{0}`")]
pub struct UnknownStyleName(pub String);

impl FromStr for NvStyle {
    type Err = UnknownStyleName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NvStyle::from_name(s).ok_or_else(|| UnknownStyleName(s.to_string()))
    }
}
