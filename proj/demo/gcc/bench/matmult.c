#include <stdio.h>
#include <time.h>

#define N 160

static double a[N][N], b[N][N], c[N][N];

static double now(void) {
  struct timespec ts;
  clock_gettime(CLOCK_MONOTONIC, &ts);
  return ts.tv_sec + ts.tv_nsec * 1e-9;
}

int main(void) {
  for (int i = 0; i < N; i++)
    for (int j = 0; j < N; j++) {
      a[i][j] = (i * 7 + j) % 13;
      b[i][j] = (i + j * 3) % 11;
    }
  double start = now();
  for (int rep = 0; rep < 4; rep++)
    for (int i = 0; i < N; i++)
      for (int j = 0; j < N; j++) {
        double s = 0;
        for (int k = 0; k < N; k++) s += a[i][k] * b[k][j];
        c[i][j] = s + rep;
      }
  double elapsed = now() - start;
  fprintf(stderr, "checksum %f\n", c[N / 2][N / 3]);
  printf("%.6f\n", elapsed);
  return 0;
}
