# Entrocone package
