import os
import traceback

import streamlit as st

from utils.logging_setup import logger
from modules import bench
from modules.report import write_csv


def render(config):
    """Render the compression blowup tab."""
    st.header("Compression Blowup")
    col1, col2 = st.columns(2)
    with col1:
        n_from = st.number_input("From n", min_value=1, max_value=bench.BLOWUP_CAP,
                                 value=int(config['blowup_from']), key="blowup_from")
    with col2:
        n_to = st.number_input("To n", min_value=1, max_value=bench.BLOWUP_CAP,
                               value=int(config['blowup_to']), key="blowup_to")
    sigma = st.text_input("x ordering (sigma)", value="natural", key="blowup_sigma")

    if st.button("Compress HWB SDDs"):
        try:
            with st.spinner("Compressing..."):
                df = bench.compress_blowup(int(n_from), int(n_to), sigma=sigma, workers=config['workers'])
            config['blowup_from'], config['blowup_to'] = int(n_from), int(n_to)
            st.dataframe(df)
            out = os.path.join(config['output_folder'], f"compress_blowup_{n_from}_{n_to}.csv")
            write_csv(df, out)
            st.success(f"Saved to {out}")
        except Exception as e:
            logger.error(f"Error in compression blowup: {str(e)}\n{traceback.format_exc()}")
            st.error(f"Error in compression blowup: {str(e)}")
