// certificates are defined after the factory lands
