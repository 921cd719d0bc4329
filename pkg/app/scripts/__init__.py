# Inicializar paquete scripts