import os
import traceback

import streamlit as st

from utils.logging_setup import logger
from modules import bench
from modules.report import to_frame, write_csv


def render(config):
    """Render the separation tab."""
    st.header("SDD_c vs minimal OBDD")
    col1, col2 = st.columns(2)
    with col1:
        n_from = st.number_input("From n", min_value=1, max_value=64, value=int(config['separation_from']))
        sigma = st.text_input("x ordering (sigma)", value="natural", key="separation_sigma")
    with col2:
        n_to = st.number_input("To n", min_value=1, max_value=64, value=int(config['separation_to']))
        rho = st.text_input("y ordering (rho)", value="natural", key="separation_rho")
    with_fixed = st.checkbox("Include SDD_HWB and OBDD_FIXED rows")

    if st.button("Run Separation"):
        if n_to < n_from:
            st.warning("The range is empty.")
            return
        try:
            with st.spinner(f"Building instances n={n_from}..{n_to}..."):
                rows = bench.separation_rows(int(n_from), int(n_to), sigma=sigma, rho=rho,
                                             with_fixed=with_fixed, cap=config['min_obdd_cap'],
                                             workers=config['workers'], record_timing=config['record_timing'])
            config['separation_from'], config['separation_to'] = int(n_from), int(n_to)
            st.dataframe(to_frame(rows))
            out = os.path.join(config['output_folder'], f"separation_{n_from}_{n_to}.csv")
            write_csv(rows, out)
            st.success(f"{len(rows)} rows written to {out}")
        except Exception as e:
            logger.error(f"Error running separation: {str(e)}\n{traceback.format_exc()}")
            st.error(f"Error running separation: {str(e)}")
