// pipeline is defined after certificates land
