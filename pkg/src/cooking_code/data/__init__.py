# Bundled data files: achievement catalog, default configs, demo scripts.
