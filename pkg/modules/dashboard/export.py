import os
import traceback

import streamlit as st

from utils.common import sanitize_filename
from utils.logging_setup import logger
from modules import bench


def render(config):
    """Render the export tab."""
    st.header("Export")
    spec = st.text_input("Object", value="hwb-sdd:4",
                         help="hwb-sdd:N, fn-sdd:N, exact:N:I, prime:N:TAG, hwb:N, vtree:hwb:N, vtree:fn:N")
    fmt = st.selectbox("Format", ["sdd", "vtree", "dot"])
    save = st.checkbox("Save to output folder")

    if st.button("Export"):
        if not spec.strip():
            st.warning("Please enter an object.")
            return
        try:
            out = os.path.join(config['output_folder'], f"{sanitize_filename(spec)}.{fmt}") if save else None
            with st.spinner(f"Exporting {spec}..."):
                text = bench.cmd_export(spec, fmt, out)
            st.text_area("Output", text, height=400)
            if out:
                st.success(f"Saved to {out}")
        except Exception as e:
            logger.error(f"Error exporting {spec}: {str(e)}\n{traceback.format_exc()}")
            st.error(f"Error exporting {spec}: {str(e)}")
