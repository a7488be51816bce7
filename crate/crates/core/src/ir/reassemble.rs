use std::collections::BTreeMap;

use super::{Document, IrError, Section, SectionRole};
use crate::diag::Diagnostic;

/// Merges assistant messages that context compaction split across records.
///
/// Adjacent assistant sections that share a message id become one section;
/// node order is kept and ids are unioned. An id that shows up again after
/// an intervening section is left alone and reported.
pub fn reassemble_split_messages(doc: Document) -> Result<Document, IrError> {
    let (sections, mut diagnostics, media, assigned) = doc.into_parts();
    if assigned {
        return Err(IrError::AlreadyAssigned);
    }

    let mut merged: Vec<Section> = Vec::with_capacity(sections.len());
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();

    for section in sections {
        if section.role == SectionRole::Assistant && !section.message_ids.is_empty() {
            let joins_previous = merged.last().is_some_and(|prev| {
                prev.role == SectionRole::Assistant && prev.message_ids.iter().any(|id| section.message_ids.contains(id))
            });
            if joins_previous {
                let index = merged.len() - 1;
                let prev = merged.last_mut().expect("checked above");
                for id in section.message_ids {
                    if !prev.message_ids.contains(&id) {
                        seen.insert(id.clone(), index);
                        prev.message_ids.push(id);
                    }
                }
                prev.nodes.extend(section.nodes);
                continue;
            }
            for id in &section.message_ids {
                if let Some(&earlier) = seen.get(id) {
                    diagnostics.push(Diagnostic::warn(
                        section.source_index,
                        format!(
                            "message id {id:?} reappears after turn {}; split fragments not adjacent, left unmerged",
                            earlier + 1
                        ),
                    ));
                }
            }
        }
        let index = merged.len();
        for id in &section.message_ids {
            seen.entry(id.clone()).or_insert(index);
        }
        merged.push(section);
    }

    Ok(Document::from_parts(merged, diagnostics, media))
}
