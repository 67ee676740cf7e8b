import traceback

import streamlit as st

from utils.logging_setup import logger
from modules import bench


def render(config):
    """Render the verify tab."""
    st.header("Verify")
    n = st.number_input("n", min_value=1, max_value=bench.VERIFY_CAP, value=4, key="verify_n")

    if st.button("Run Checks"):
        try:
            with st.spinner(f"Checking n={n}..."):
                report = bench.cmd_verify(int(n))
            df = report.to_frame()
            df['passed'] = df['passed'].map({True: '✅', False: '❌'})
            st.dataframe(df)
            if report.passed:
                st.success(f"All {len(report.checks)} checks passed")
            else:
                st.error(f"{len(report.failures())} of {len(report.checks)} checks failed")
        except Exception as e:
            logger.error(f"Error verifying n={n}: {str(e)}\n{traceback.format_exc()}")
            st.error(f"Error verifying n={n}: {str(e)}")
