from .overlay import render_overlay, save_overlay
