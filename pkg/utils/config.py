import json
import os
from typing import Dict

from utils.logging_setup import logger

CONFIG_FILE = "settings.json"

DEFAULT_CONFIG = {
    "output_folder": "results",
    "workers": 1,
    "record_timing": True,
    "min_obdd_cap": 16,
    "growth_ratio_threshold": 1.5,
    "separation_from": 2,
    "separation_to": 10,
    "blowup_from": 4,
    "blowup_to": 14
}


def load_config(config_file: str = CONFIG_FILE) -> Dict:
    try:
        with open(config_file, 'r') as f:
            logger.info(f"Loading configuration from {config_file}")
            config = json.load(f)
    except FileNotFoundError:
        logger.warning("Configuration file not found. Creating a new one with default settings.")
        config = dict(DEFAULT_CONFIG)
        config["output_folder"] = os.path.join(os.getcwd(), DEFAULT_CONFIG["output_folder"])
        with open(config_file, 'w') as f:
            json.dump(config, f, indent=4)
        return config

    # Keys added after the file was written fall back to defaults
    for key, value in DEFAULT_CONFIG.items():
        config.setdefault(key, value)
    if config["min_obdd_cap"] > 16:
        logger.warning(f"min_obdd_cap={config['min_obdd_cap']} exceeds 16, clamping")
        config["min_obdd_cap"] = 16
    return config


def save_config(config: Dict, config_file: str = CONFIG_FILE) -> bool:
    try:
        with open(config_file, 'w') as f:
            json.dump(config, f, indent=4)
            logger.info("Configuration saved successfully")
        return True
    except Exception as e:
        logger.error(f"Error saving configuration: {str(e)}")
        return False
