"""Streamlit tabs over the bench operations; each module exposes render(config)."""
