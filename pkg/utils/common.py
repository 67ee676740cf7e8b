import os
import re
from typing import List, Optional

from .logging_setup import logger


def create_folder(folder_name):
    if folder_name and not os.path.exists(folder_name):
        logger.info(f"Creating folder: {folder_name}")
        os.makedirs(folder_name)


def sanitize_filename(filename):
    """Turn an object spec such as 'prime:4:P2,0' into a safe file stem."""
    return re.sub(r'[\\/*?:"<>|,\s]+', '_', filename).strip('_')


def parse_ordering(text: str) -> List[int]:
    """Parse a comma-separated list of variable ids."""
    text = text.strip()
    if not text:
        return []
    try:
        return [int(token) for token in text.split(',')]
    except ValueError:
        logger.error(f"Invalid ordering: {text}")
        raise ValueError(f"ordering must be comma-separated integers, got {text!r}")


def save_text_to_file(text: Optional[str], path: str) -> Optional[str]:
    """Write UTF-8 text with LF line endings, creating the parent folder."""
    if text is None:
        logger.warning(f"Nothing to save for {path}.")
        return None

    create_folder(os.path.dirname(path))
    logger.info(f"Saving output to {path}")
    with open(path, "w", encoding='utf-8', newline='\n') as file:
        file.write(text)

    return path
