//! Inline base64 media: decoded to files, replaced by placeholders.

use std::fs;
use std::io;
use std::path::Path;

use base64::alphabet;
use base64::engine::{DecodePaddingMode, GeneralPurpose, GeneralPurposeConfig};
use base64::Engine;
use serde::Serialize;

use crate::lexer::{BlockType, ContentBlock};

/// Directory name, relative to the output directory, that media lands in.
pub const MEDIA_DIR_NAME: &str = "media";

pub const UNDECODABLE_PLACEHOLDER: &str = "[image: <undecodable>]";

const LENIENT: GeneralPurpose = GeneralPurpose::new(
    &alphabet::STANDARD,
    GeneralPurposeConfig::new().with_decode_padding_mode(DecodePaddingMode::Indifferent),
);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MediaArtifact {
    /// Path relative to the output directory, e.g. `media/img-3.png`.
    pub relative_path: String,
    pub placeholder: String,
    pub byte_length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedMedia {
    pub block: ContentBlock,
    pub artifact: Option<MediaArtifact>,
    pub warning: Option<String>,
}

pub fn placeholder(relative_path: &str) -> String {
    format!("[image: {relative_path}]")
}

pub fn media_extension(media_type: Option<&str>) -> &'static str {
    match media_type.map(str::to_ascii_lowercase).as_deref() {
        Some("image/png") => "png",
        Some("image/jpeg" | "image/jpg") => "jpg",
        Some("image/gif") => "gif",
        Some("image/webp") => "webp",
        Some("image/svg+xml") => "svg",
        Some("application/pdf") => "pdf",
        _ => "bin",
    }
}

/// Replaces an image block by a placeholder text block.
///
/// The payload is written to `media_dir/img-<ordinal>.<ext>` when `media_dir`
/// is given; the placeholder text is the same either way. Non-image blocks
/// come back unchanged.
pub fn extract_inline_media(
    block: &ContentBlock,
    media_dir: Option<&Path>,
    ordinal: usize,
) -> io::Result<ExtractedMedia> {
    if block.block_type != BlockType::Image {
        return Ok(ExtractedMedia {
            block: block.clone(),
            artifact: None,
            warning: None,
        });
    }

    let compact: String = block.text.chars().filter(|c| !c.is_ascii_whitespace()).collect();
    let mut text_block = ContentBlock::text("");
    text_block.tool_use_id = block.tool_use_id.clone();

    let bytes = match LENIENT.decode(compact.as_bytes()) {
        Ok(bytes) => bytes,
        Err(e) => {
            text_block.text = UNDECODABLE_PLACEHOLDER.to_string();
            return Ok(ExtractedMedia {
                block: text_block,
                artifact: None,
                warning: Some(format!("inline image {ordinal} is not valid base64: {e}")),
            });
        }
    };

    let file_name = format!("img-{ordinal}.{}", media_extension(block.media_type.as_deref()));
    if let Some(dir) = media_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(&file_name), &bytes)?;
    }
    let relative_path = format!("{MEDIA_DIR_NAME}/{file_name}");
    let placeholder = placeholder(&relative_path);
    text_block.text = placeholder.clone();
    Ok(ExtractedMedia {
        block: text_block,
        artifact: Some(MediaArtifact {
            relative_path,
            placeholder,
            byte_length: bytes.len(),
        }),
        warning: None,
    })
}
